#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pvthresh {

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns the process exit status: 0 success, 2 usage error,
// 3 data error, 4 numeric failure. Errors are reported as JSON on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pvthresh
