#include "cubesphere/cube.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "cubesphere/error.hpp"

namespace cubesphere {

int cube_dim_from_corners(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) return -1;
  return std::countr_zero(n);
}

void canonicalize_into(std::span<const VertexId> corners, std::vector<VertexId>& out, int* sign) {
  const int k = cube_dim_from_corners(corners.size());
  if (k < 0) throw PreconditionError("corner array length is not a power of two");
  std::size_t r = 0;
  for (std::size_t c = 1; c < corners.size(); ++c)
    if (corners[c] < corners[r]) r = c;

  // Axes sorted by the label of the neighbor of the minimum corner.
  std::array<int, 32> perm{};
  for (int j = 0; j < k; ++j) perm[j] = j;
  std::sort(perm.begin(), perm.begin() + k, [&](int x, int y) {
    return corners[r ^ (std::size_t{1} << x)] < corners[r ^ (std::size_t{1} << y)];
  });

  out.resize(corners.size());
  for (std::size_t c = 0; c < corners.size(); ++c) {
    std::size_t src = 0;
    for (int t = 0; t < k; ++t)
      if (c >> t & 1) src |= std::size_t{1} << perm[t];
    out[c] = corners[r ^ src];
  }
  if (sign) {
    int inversions = 0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (perm[a] > perm[b]) ++inversions;
    int s = (std::popcount(r) + inversions) % 2 ? -1 : 1;
    *sign = s;
  }
}

Canonical canonicalize(std::span<const VertexId> corners) {
  Canonical c;
  canonicalize_into(corners, c.corners, &c.sign);
  return c;
}

std::vector<VertexId> cube_facet(std::span<const VertexId> corners, int axis, int side) {
  const std::size_t half = corners.size() / 2;
  std::vector<VertexId> f(half);
  const std::size_t low = (std::size_t{1} << axis) - 1;
  for (std::size_t c = 0; c < half; ++c) {
    std::size_t full = (c & low) | ((c & ~low) << 1) | (std::size_t(side) << axis);
    f[c] = corners[full];
  }
  return f;
}

}  // namespace cubesphere
