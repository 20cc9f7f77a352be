#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emg::cli {

/// Run the command-line front end. Exit codes: 0 success, 1 input error,
/// 2 numeric/convergence failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace emg::cli
