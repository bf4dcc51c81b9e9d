#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>

namespace poncelet::cli {

enum Exit : int { ok = 0, negative = 1, input_error = 2, numeric_failure = 3 };

/// Runs the command line; all output goes to `out` / `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace poncelet::cli
