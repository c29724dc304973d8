#pragma once

#include <iosfwd>

namespace alphaquota::cli {

/// Entry point of the `alpha` tool. Returns 0 on success, 1 on domain errors
/// (budget exceeded, inapplicable domain algorithm) and 2 on usage or IO errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace alphaquota::cli
