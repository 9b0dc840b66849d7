#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cubesphere/complex.hpp"

namespace cubesphere {

inline constexpr std::uint32_t kNone = 0xffffffffu;

// Square complex with every square given a cyclic vertex order, coherent when orientable.
struct OrientedSurface {
  std::size_t n_vertices = 0;
  std::vector<std::array<VertexId, 4>> cycle;          // per square
  std::vector<std::array<std::uint32_t, 4>> sq_edges;  // edge t joins cycle[t], cycle[t+1]
  std::vector<std::array<VertexId, 2>> edge_ends;      // sorted endpoints
  std::vector<std::array<std::uint32_t, 2>> edge_sq;   // kNone for a missing side
  bool closed = false;
  bool orientable = false;
  std::size_t components = 0;
  std::optional<std::size_t> conflict_edge;

  // Position (0..3) of edge e inside square s.
  int slot(std::uint32_t s, std::uint32_t e) const;
  std::uint32_t other_square(std::uint32_t e, std::uint32_t s) const {
    return edge_sq[e][0] == s ? edge_sq[e][1] : edge_sq[e][0];
  }
  // Edge index between two vertices, or kNone.
  std::uint32_t edge_between(VertexId a, VertexId b) const;
  std::vector<std::vector<std::uint32_t>> vertex_edges() const;

  std::vector<std::vector<std::uint32_t>> vertex_edges_cache;
};

OrientedSurface orient_surface(const CubeComplex& c);

// Oriented square cycle -> corner array.
inline std::vector<VertexId> quad_of(const std::array<VertexId, 4>& q) { return {q[0], q[1], q[3], q[2]}; }

}  // namespace cubesphere
