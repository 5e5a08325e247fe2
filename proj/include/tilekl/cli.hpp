#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tilekl::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kIoError = 3,
};

// Runs one subcommand (patterns, analyze, evolve, cluster, compare, snippets).
// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace tilekl::cli
