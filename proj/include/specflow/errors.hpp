#pragma once

#include <stdexcept>
#include <string>

namespace specflow {

/// Base of every error raised by the library. `kind()` is a stable tag used
/// by the CLI to pick exit codes and by tests to match failures.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SPECFLOW_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  };

SPECFLOW_DEFINE_ERROR(NotSelfAdjoint)
SPECFLOW_DEFINE_ERROR(EigenSolverFailure)
SPECFLOW_DEFINE_ERROR(BoundaryAmbiguity)
SPECFLOW_DEFINE_ERROR(NoGap)
SPECFLOW_DEFINE_ERROR(DepthExceeded)
SPECFLOW_DEFINE_ERROR(EndpointMismatch)
SPECFLOW_DEFINE_ERROR(DimensionMismatch)
SPECFLOW_DEFINE_ERROR(InvalidSpec)
SPECFLOW_DEFINE_ERROR(WindowTooSmall)
SPECFLOW_DEFINE_ERROR(GeneratorFailure)
SPECFLOW_DEFINE_ERROR(CertificateBroken)
SPECFLOW_DEFINE_ERROR(OracleError)
SPECFLOW_DEFINE_ERROR(ConfigError)

#undef SPECFLOW_DEFINE_ERROR

}  // namespace specflow
