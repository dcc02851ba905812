#include "cli.hpp"

int main(int argc, char** argv) { return specflow::cli::run_cli(argc, argv); }
