#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stopgen::cli {

/// Entry point of the `stopgen` tool. `args` excludes the program name.
/// Returns the process exit code (0 success, 1 runtime failure, 2 usage error).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Seed of run `run_index` of `algorithm_index` under the master seed.
std::uint64_t run_seed(std::uint64_t master, std::size_t algorithm_index, std::size_t run_index);

}  // namespace stopgen::cli
