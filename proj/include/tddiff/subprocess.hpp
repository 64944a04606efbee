// Minimal fork/exec wrapper. No shell is involved; argv is passed verbatim,
// so paths with spaces or metacharacters need no quoting.
#pragma once

#include <string>
#include <vector>

namespace tddiff {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
  bool ok() const { return exit_code == 0; }
};

// Runs argv[0] with the given arguments. cwd empty means inherit.
// extra_env entries are "KEY=VALUE" strings appended to the environment.
// Throws std::runtime_error if the process cannot be spawned.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& cwd = {},
                          const std::vector<std::string>& extra_env = {});

}  // namespace tddiff
