#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace causent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInsufficientSamples = 2;

// args excludes the program name. Results go to `out` (or the files named
// by --out style flags), diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causent::cli
