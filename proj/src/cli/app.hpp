#pragma once

#include <iosfwd>

namespace ponomarev::cli {

/// Parses arguments, runs one subcommand and returns its exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ponomarev::cli
