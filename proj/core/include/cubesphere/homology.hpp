#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubesphere/complex.hpp"

namespace cubesphere {

struct Coefficients {
  enum class Kind { Integer, Rational, Prime } kind = Kind::Integer;
  std::uint32_t p = 0;

  static Coefficients integers() { return {Kind::Integer, 0}; }
  static Coefficients rationals() { return {Kind::Rational, 0}; }
  static Coefficients mod(std::uint32_t p) { return {Kind::Prime, p}; }
  std::string name() const;
};

struct HomologyOptions {
  // Integer SNF is refused above this many cells.
  std::size_t snf_cell_limit = 20000;
};

struct SparseColumn {
  std::vector<std::uint32_t> rows;
  std::vector<int> values;
};

struct BoundaryMatrix {
  int k = 0;
  std::size_t rows = 0;  // (k-1)-cells
  std::size_t cols = 0;  // k-cells
  std::vector<SparseColumn> columns;
};

// Orientation sign of the facet (axis, side) of a canonical cube, in the canonical frame of the facet.
int facet_incidence(std::span<const VertexId> canonical_cube, int axis, int side);

BoundaryMatrix boundary_matrix(const CubeComplex& c, int k);
// True when the product of consecutive boundary matrices vanishes.
bool boundary_squares_to_zero(const CubeComplex& c, int k);

struct RankResult {
  std::size_t rank = 0;
  std::vector<long long> torsion;  // invariant factors > 1, integer mode only
};

// Rank (and torsion for integers) of a sparse integer matrix.
RankResult matrix_rank(const BoundaryMatrix& m, Coefficients coeff);

struct HomologyProfile {
  Coefficients coeff;
  std::vector<long long> betti;
  std::vector<std::vector<long long>> torsion;  // torsion[k] belongs to H_k
  long long euler = 0;
  std::string csv(const FVector& f) const;
};

HomologyProfile betti_numbers(const CubeComplex& c, Coefficients coeff, HomologyOptions opt = {});

struct SurfaceInvariants {
  bool closed = false;
  bool orientable = false;
  int genus = 0;
  long long euler = 0;
  std::size_t components = 0;
  std::optional<std::size_t> conflict_edge;  // orientation witness
};

SurfaceInvariants surface_invariants(const CubeComplex& c);

bool homology_sphere_check(const CubeComplex& c, int d, HomologyOptions opt = {});
bool h1_trivial(const CubeComplex& c, HomologyOptions opt = {});

}  // namespace cubesphere
