#include "cubesphere/io.hpp"

#include <fstream>
#include <sstream>

#include "cubesphere/error.hpp"

namespace cubesphere {

std::string serialize(const CubeComplex& c) {
  std::string out = "cubecomplex " + std::to_string(c.dim()) + " " + std::to_string(c.n_vertices()) + "\n";
  for (auto [k, i] : c.maximal_cells()) {
    out += "cube " + std::to_string(k);
    if (k == 0) {
      out += " " + std::to_string(i);
    } else {
      for (VertexId v : c.cell(k, i)) out += " " + std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

CubeComplex parse_complex(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  int dim = 0;
  std::size_t nv = 0;
  std::vector<std::vector<VertexId>> cubes;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    auto fail = [&](const std::string& why) {
      throw PreconditionError("line " + std::to_string(lineno) + ": " + why);
    };
    if (!header) {
      if (word != "cubecomplex" || !(ls >> dim >> nv)) fail("expected 'cubecomplex <dim> <n_vertices>'");
      header = true;
      continue;
    }
    if (word == "bmap") continue;
    if (word != "cube") fail("unknown record '" + word + "'");
    int k;
    if (!(ls >> k) || k < 0 || k > 30) fail("bad cube dimension");
    std::vector<VertexId> corners;
    long long v;
    while (ls >> v) {
      if (v < 0) fail("negative vertex id");
      corners.push_back(static_cast<VertexId>(v));
    }
    if (corners.size() != corner_count(k)) fail("cube " + std::to_string(k) + " needs " +
                                                std::to_string(corner_count(k)) + " corners");
    cubes.push_back(std::move(corners));
  }
  if (!header) throw PreconditionError("missing cubecomplex header");
  return build_complex(dim, nv, cubes);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError("cannot write " + path);
  f << text;
}

CubeComplex read_complex(const std::string& path) { return parse_complex(read_text(path)); }
void write_complex(const std::string& path, const CubeComplex& c) { write_text(path, serialize(c)); }

}  // namespace cubesphere
