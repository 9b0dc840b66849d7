#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cubesphere/cube.hpp"

namespace cubesphere {

// Hash set of canonical k-cubes stored as a flat corner array.
class CellTable {
 public:
  explicit CellTable(int k = 0);

  int dim() const { return k_; }
  std::size_t size() const { return data_.size() / stride_; }
  std::span<const VertexId> operator[](std::size_t i) const {
    return {data_.data() + i * stride_, stride_};
  }
  std::optional<std::size_t> find(std::span<const VertexId> canonical) const;
  std::pair<std::size_t, bool> insert(std::span<const VertexId> canonical);
  void sort();

 private:
  std::size_t hash(std::span<const VertexId> c) const;
  void rehash(std::size_t slots);

  int k_;
  std::size_t stride_;
  std::vector<VertexId> data_;
  std::vector<std::uint32_t> slots_;
};

struct FVector {
  std::vector<std::size_t> f;
  long long euler() const;
  std::size_t operator[](std::size_t k) const { return k < f.size() ? f[k] : 0; }
  std::string csv() const;
  bool operator==(const FVector&) const = default;
};

class CubeComplex {
 public:
  CubeComplex() = default;

  int dim() const { return dim_; }
  // Highest dimension with at least one cell, -1 when empty.
  int top_dim() const;
  std::size_t n_vertices() const { return n_vertices_; }
  std::size_t count(int k) const;
  std::size_t total_cells() const;
  std::span<const VertexId> cell(int k, std::size_t i) const { return tables_[k][i]; }
  std::optional<std::size_t> find(std::span<const VertexId> corners) const;
  std::optional<std::size_t> find_canonical(int k, std::span<const VertexId> canonical) const;
  bool is_maximal(int k, std::size_t i) const;
  FVector fvector() const;
  // Maximal cells as (k, index), ordered by dimension descending then index.
  std::vector<std::pair<int, std::size_t>> maximal_cells() const;
  // Facets as corner arrays in canonical order.
  std::vector<std::vector<VertexId>> top_cells() const;

  bool operator==(const CubeComplex& o) const;

 private:
  friend CubeComplex build_complex(int, std::size_t, const std::vector<std::vector<VertexId>>&);
  int dim_ = 0;
  std::size_t n_vertices_ = 0;
  std::vector<CellTable> tables_;  // tables_[k] for 1 <= k <= dim; tables_[0] unused
  std::vector<std::vector<std::uint8_t>> maximal_;
};

// Generates all faces and deduplicates under cube symmetry.
CubeComplex build_complex(int dim, std::size_t n_vertices,
                          const std::vector<std::vector<VertexId>>& top_cubes);
// n_vertices = 1 + largest id used.
CubeComplex build_complex(int dim, const std::vector<std::vector<VertexId>>& top_cubes);

// Maximal cells of every dimension as corner arrays.
std::vector<std::vector<VertexId>> maximal_corner_arrays(const CubeComplex& c);

struct Violation {
  int dim_a;
  std::size_t cell_a;
  int dim_b;
  std::size_t cell_b;
  std::string reason;
};

struct ValidationReport {
  bool is_complex = true;
  bool is_closed_pseudomanifold = false;
  std::vector<Violation> violations;
};

ValidationReport validate(const CubeComplex& c, std::size_t max_violations = 64);
bool pseudomanifold_check(const CubeComplex& c);

struct SimplicialComplex {
  std::vector<VertexId> vertices;              // labels of link vertices
  std::vector<std::vector<int>> simplices;     // maximal simplices, sorted local indices
  int dim() const;
};

SimplicialComplex vertex_link(const CubeComplex& c, VertexId v);

struct ManifoldReport {
  bool ok = false;
  bool links_checked = false;  // false when only the pseudomanifold test was possible
  std::optional<VertexId> bad_vertex;
  std::string reason;
};

ManifoldReport manifold_check(const CubeComplex& c, int d);

struct BoundReport {
  double diagonal_bound = 0;
  bool diagonal_ok = true;
  bool quadratic_checked = false;
  double quadratic_bound = 0;
  bool quadratic_ok = true;
  bool ok() const { return diagonal_ok && quadratic_ok; }
};

BoundReport upper_bound_checks(const CubeComplex& c);

// 0/1 per vertex; each component colors its smallest vertex 0. Throws on an odd cycle.
std::vector<std::uint8_t> bipartite_classes(const CubeComplex& c);
std::vector<std::uint8_t> bipartite_classes(std::size_t n_vertices,
                                            const std::vector<std::pair<VertexId, VertexId>>& edges);

}  // namespace cubesphere
