#pragma once

#include <string>
#include <vector>

namespace embkit::cli {

// Entry point shared by the binary and the test suites. Returns the
// process exit status: 0 iff every requested output was fully written.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace embkit::cli
