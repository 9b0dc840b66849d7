#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cubesphere/complex.hpp"

namespace cubesphere::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitFillFailed = 2;
inline constexpr int kExitUsage = 64;

// Interchange or JSON complex file, detected from the content.
CubeComplex load_complex_file(const std::string& path);

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cubesphere::cli
