#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace euslem::cli {

/// Runs `euslem <command> [flags]`. `args` excludes the program name.
/// Returns 0 on success, 1 on a usage error, 2 on a data error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace euslem::cli
