#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cubesphere {

using VertexId = std::uint32_t;

// Corner c of a k-cube sits at coordinates given by the bits of c.
inline constexpr std::size_t corner_count(int k) { return std::size_t{1} << k; }

// Returns k with 2^k == n, or -1.
int cube_dim_from_corners(std::size_t n);

struct Canonical {
  std::vector<VertexId> corners;
  int sign = 1;  // orientation of the input relative to the canonical form
};

// Lexicographically least relabeling over the 2^k k! cube symmetries.
Canonical canonicalize(std::span<const VertexId> corners);
void canonicalize_into(std::span<const VertexId> corners, std::vector<VertexId>& out,
                       int* sign = nullptr);

// Facet of a k-cube obtained by fixing coordinate `axis` to `side`.
std::vector<VertexId> cube_facet(std::span<const VertexId> corners, int axis, int side);

// Corners (a,b,c,d) given in cyclic order -> bitmask order.
inline std::vector<VertexId> quad(VertexId a, VertexId b, VertexId c, VertexId d) {
  return {a, b, d, c};
}

// Product of cubes: corner index (cb << ka) | ca, vertex label from `label`.
template <class F>
std::vector<VertexId> cube_product(std::span<const VertexId> a, std::span<const VertexId> b,
                                   F&& label) {
  std::vector<VertexId> out(a.size() * b.size());
  for (std::size_t cb = 0; cb < b.size(); ++cb)
    for (std::size_t ca = 0; ca < a.size(); ++ca) out[cb * a.size() + ca] = label(a[ca], b[cb]);
  return out;
}

}  // namespace cubesphere
