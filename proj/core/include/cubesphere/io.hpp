#pragma once

#include <string>
#include <string_view>

#include "cubesphere/complex.hpp"

namespace cubesphere {

// `cubecomplex <dim> <n_vertices>` then one `cube <k> v...` line per maximal cell.
std::string serialize(const CubeComplex& c);
CubeComplex parse_complex(std::string_view text);

CubeComplex read_complex(const std::string& path);
void write_complex(const std::string& path, const CubeComplex& c);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace cubesphere
