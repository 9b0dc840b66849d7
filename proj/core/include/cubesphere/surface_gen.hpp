#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubesphere/complex.hpp"

namespace cubesphere {

bool is_odd_prime(long long n);

// Left vertex i has id i, right vertex i has id n + i.
struct CirculantBipartite {
  int n = 0;
  int d_max = 0;
  std::size_t edge_count() const { return 2 * static_cast<std::size_t>(n) * d_max; }
  VertexId left(long long i) const { return static_cast<VertexId>(((i % n) + n) % n); }
  VertexId right(long long i) const { return static_cast<VertexId>(n + ((i % n) + n) % n); }
  bool is_left(VertexId v) const { return v < static_cast<VertexId>(n); }
  int index(VertexId v) const { return static_cast<int>(v) % n; }
};

// Largest odd integer below n/10.
int d_max_for(int n);
CirculantBipartite build_graph(int n);

struct BoundaryCycle {
  bool even = false;
  std::vector<VertexId> vertices;  // walk order
  std::vector<int> labels;         // strip label used to leave each vertex
};

struct RotationSurface {
  CirculantBipartite graph;
  std::vector<int> rotation;  // counterclockwise strip order at every disk
  std::vector<BoundaryCycle> cycles;
  std::size_t even_count() const;
  std::size_t odd_count() const;
  long long euler() const;
  long long genus() const { return (2 - euler()) / 2; }
};

RotationSurface trace_cycles(const CirculantBipartite& g);

struct CycleSplit {
  bool even = false;
  bool anchor_left = false;                   // endpoint class of the pieces
  std::vector<VertexId> cycle;                // normalized: odd cycles run with differences 1..d_max
  std::vector<std::vector<VertexId>> periods; // P_i (odd cycles)
  std::vector<std::vector<VertexId>> trimmed; // P'_i, endpoints in the anchor class (may be a single vertex)
  std::vector<std::vector<VertexId>> gaps;    // Q_i joining consecutive P'_i (may be a single vertex)
  std::vector<std::vector<VertexId>> whole;   // even cycle as one closed simple path
  std::vector<std::vector<VertexId>> segments;  // pieces used by the cubulation, in cycle order
};

struct CyclePathSplit {
  std::vector<CycleSplit> cycles;
  std::size_t path_count = 0;  // nonempty P'_i, Q_i and whole even cycles
  double c = 0;                // path_count / (2n)
};

CyclePathSplit split_paths(const RotationSurface& r);

struct DivisibilityTable {
  bool ok = true;
  std::size_t entries = 0;
  std::optional<std::pair<int, int>> witness;  // (d, c) with n | (c+1)(2d+c)/2
};
DivisibilityTable divisibility_table(int n, int d_max);

struct PropertyReport {
  bool prop_i = false;
  bool prop_ii = false;
  bool prop_iii = false;
  std::string witness;
  double c = 0;
  std::size_t windows_checked = 0;
};

// The constant allowed in (III).
inline constexpr double kPathConstant = 2.0;

PropertyReport check_properties(const RotationSurface& r);

CubeComplex cubulate_cycles(const CirculantBipartite& g, const RotationSurface& r, const CyclePathSplit& p);

struct SquareSurface {
  CubeComplex complex;
  RotationSurface rotation;
  CyclePathSplit split;
  PropertyReport properties;
  bool ten_applied = false;
};

SquareSurface n_square_surface(int n);

}  // namespace cubesphere
