#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rwpoly::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kValidation = 3,
  kRefused = 4,
  kVerifyFailed = 5,
};

/// Runs one command line (without the program name). Messages go to `out`
/// and `err`; nothing calls std::exit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// argv-style entry point.
int main(int argc, char** argv);

}  // namespace rwpoly::cli
