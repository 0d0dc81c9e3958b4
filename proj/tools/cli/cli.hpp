#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace apc::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kMismatch = 2, kBudget = 3 };

/// Runs one `apc` invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_main(int argc, char** argv);

/// 64-bit FNV-1a, used for config and file digests in manifest.json.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace apc::cli
