#pragma once

#include "specflow/components.hpp"
#include "specflow/errors.hpp"
#include "specflow/families.hpp"
#include "specflow/flow.hpp"
#include "specflow/gluing.hpp"
#include "specflow/operator.hpp"
#include "specflow/oracle.hpp"
#include "specflow/path.hpp"
#include "specflow/properties.hpp"
#include "specflow/random.hpp"
#include "specflow/serialize.hpp"
