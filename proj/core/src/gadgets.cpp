#include <algorithm>

#include "cubesphere/error.hpp"
#include "cubesphere/transforms.hpp"

namespace cubesphere {

void split_square5(const std::array<VertexId, 4>& o, VertexId& next, std::vector<std::vector<VertexId>>& out) {
  const std::array<VertexId, 4> t{next, next + 1, next + 2, next + 3};
  next += 4;
  out.push_back(quad(t[0], t[1], t[2], t[3]));
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4;
    out.push_back(quad(o[i], o[j], t[j], t[i]));
  }
}

void split_square10(const std::array<VertexId, 4>& o, VertexId& next, std::vector<std::vector<VertexId>>& out) {
  std::array<VertexId, 8> h;
  for (int i = 0; i < 8; ++i) h[i] = next + i;
  const VertexId z = next + 8;
  next += 9;
  for (int i = 0; i < 4; ++i) out.push_back(quad(z, h[2 * i], h[2 * i + 1], h[(2 * i + 2) % 8]));
  out.push_back(quad(o[0], o[1], h[1], h[0]));
  out.push_back(quad(o[1], h[1], h[2], h[3]));
  out.push_back(quad(o[1], o[2], h[4], h[3]));
  out.push_back(quad(o[2], o[3], h[5], h[4]));
  out.push_back(quad(o[3], h[5], h[6], h[7]));
  out.push_back(quad(o[3], o[0], h[0], h[7]));
}

void inset_cube7(std::span<const VertexId> c, VertexId& next, std::vector<std::vector<VertexId>>& out) {
  std::vector<VertexId> inner(8);
  for (int i = 0; i < 8; ++i) inner[i] = next + i;
  next += 8;
  out.push_back(inner);
  for (int axis = 0; axis < 3; ++axis)
    for (int side = 0; side < 2; ++side) {
      auto fo = cube_facet(c, axis, side);
      auto fi = cube_facet(inner, axis, side);
      std::vector<VertexId> q(fo);
      q.insert(q.end(), fi.begin(), fi.end());
      out.push_back(std::move(q));
    }
}

Gadget gadget_from_name(const std::string& name) {
  if (name == "insert5" || name == "insert_square_5") return Gadget::InsertSquare5;
  if (name == "inset7" || name == "inset_cube_7") return Gadget::InsetCube7;
  if (name == "ten" || name == "square_10") return Gadget::Square10;
  throw PreconditionError("unknown gadget '" + name + "'");
}

CubeComplex apply_gadget(const CubeComplex& c, std::span<const VertexId> cell, Gadget g) {
  const int want = g == Gadget::InsetCube7 ? 3 : 2;
  const int k = cube_dim_from_corners(cell.size());
  if (k != want) throw PreconditionError("gadget needs a " + std::to_string(want) + "-cell");
  auto idx = c.find(cell);
  if (!idx) throw PreconditionError("cell is not in the complex");
  return apply_gadget(c, k, *idx, g);
}

CubeComplex apply_gadget(const CubeComplex& c, int k, std::size_t index, Gadget g) {
  const int want = g == Gadget::InsetCube7 ? 3 : 2;
  if (k != want) throw PreconditionError("gadget needs a " + std::to_string(want) + "-cell");
  if (index >= c.count(k)) throw PreconditionError("cell index out of range");
  if (!c.is_maximal(k, index)) throw PreconditionError("gadget target must be a maximal cell");
  std::vector<std::vector<VertexId>> cells;
  for (auto [kk, i] : c.maximal_cells()) {
    if (kk == k && i == index) continue;
    if (kk == 0) {
      cells.push_back({static_cast<VertexId>(i)});
      continue;
    }
    auto s = c.cell(kk, i);
    cells.emplace_back(s.begin(), s.end());
  }
  VertexId next = static_cast<VertexId>(c.n_vertices());
  auto target = c.cell(k, index);
  if (g == Gadget::InsetCube7) {
    inset_cube7(target, next, cells);
  } else {
    std::array<VertexId, 4> cyc{target[0], target[1], target[3], target[2]};
    if (g == Gadget::InsertSquare5) split_square5(cyc, next, cells);
    else split_square10(cyc, next, cells);
  }
  return build_complex(c.dim(), next, cells);
}

CubeComplex split_all_squares5(const CubeComplex& c) {
  std::vector<std::vector<VertexId>> cells;
  VertexId next = static_cast<VertexId>(c.n_vertices());
  for (auto [k, i] : c.maximal_cells()) {
    if (k == 0) {
      cells.push_back({static_cast<VertexId>(i)});
      continue;
    }
    auto s = c.cell(k, i);
    if (k == 2) split_square5({s[0], s[1], s[3], s[2]}, next, cells);
    else cells.emplace_back(s.begin(), s.end());
  }
  return build_complex(c.dim(), next, cells);
}

CubeComplex warmup_complex(int m, int d, WarmupVariant variant) {
  if (m < 2) throw PreconditionError("warm-up needs m >= 2");
  if (d < 2) throw PreconditionError("warm-up needs d >= 2");
  // K_{m,m}: class A = 0..m-1 (contains the smallest vertex), class B = m..2m-1.
  const VertexId km = 2 * m;
  auto id = [&](VertexId x, VertexId y) { return x * km + y; };
  std::vector<std::vector<VertexId>> cells;
  for (int a1 = 0; a1 < m; ++a1)
    for (int b1 = m; b1 < 2 * m; ++b1)
      for (int a2 = 0; a2 < m; ++a2)
        for (int b2 = m; b2 < 2 * m; ++b2)
          cells.push_back({id(a1, a2), id(b1, a2), id(a1, b2), id(b1, b2)});
  VertexId next = km * km;
  // Cones over {0} x K and K x {0}.
  for (int which = 0; which < 2; ++which) {
    auto at = [&](VertexId x) { return which == 0 ? id(0, x) : id(x, 0); };
    const VertexId apex = next++;
    if (variant == WarmupVariant::Fan) {
      // Apex joined to class B; each a in A is the center of a fan of m squares.
      for (int a = 0; a < m; ++a)
        for (int j = 0; j < m; ++j) {
          VertexId b = m + j, b2 = m + (j + 1) % m;
          split_square5({apex, at(b), at(a), at(b2)}, next, cells);
        }
    } else {
      // Apex edges towards class A split in two, then every cone square split in five.
      std::vector<VertexId> mid(m);
      for (int a = 0; a < m; ++a) mid[a] = next++;
      for (int a = 0; a < m; ++a)
        for (int b = m; b < 2 * m; ++b) split_square5({apex, mid[a], at(a), at(b)}, next, cells);
    }
  }
  CubeComplex k2 = build_complex(2, next, cells);
  if (d == 2) return k2;
  CubeComplex out = k2;
  for (int i = 2; i < d; ++i) out = cartesian_product(out, interval_complex(1));
  return out;
}

}  // namespace cubesphere
