#include "cubesphere/transforms.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "cubesphere/error.hpp"
#include "cubesphere/surface.hpp"

namespace cubesphere {

namespace {

std::vector<std::vector<VertexId>> maximal_arrays(const CubeComplex& c) { return maximal_corner_arrays(c); }

void require_valid(const CubeComplex& c, const std::string& what) {
  auto r = validate(c, 1);
  if (!r.is_complex)
    throw ValidationError(what + ": " + r.violations.front().reason + " (cells " +
                          std::to_string(r.violations.front().cell_a) + ", " +
                          std::to_string(r.violations.front().cell_b) + ")");
}

}  // namespace

CubeComplex cartesian_product(const CubeComplex& a, const CubeComplex& b) {
  const std::size_t nb = b.n_vertices();
  auto ma = maximal_arrays(a), mb = maximal_arrays(b);
  std::vector<std::vector<VertexId>> cells;
  cells.reserve(ma.size() * mb.size());
  auto label = [&](VertexId x, VertexId y) { return static_cast<VertexId>(x * nb + y); };
  for (const auto& ca : ma)
    for (const auto& cb : mb) cells.push_back(cube_product<decltype(label)&>(ca, cb, label));
  return build_complex(a.dim() + b.dim(), a.n_vertices() * nb, cells);
}

CubeComplex interval_complex(int k) {
  if (k < 1) throw PreconditionError("interval needs k >= 1");
  std::vector<std::vector<VertexId>> cells;
  for (int i = 0; i < k; ++i) cells.push_back({VertexId(i), VertexId(i + 1)});
  return build_complex(1, k + 1, cells);
}

CubeComplex cycle_complex(int k) {
  if (k < 3) throw PreconditionError("cycle needs k >= 3");
  std::vector<std::vector<VertexId>> cells;
  for (int i = 0; i < k; ++i) cells.push_back({VertexId(i), VertexId((i + 1) % k)});
  return build_complex(1, k, cells);
}

CubeComplex torus_complex(int d) {
  if (d < 1) throw PreconditionError("torus needs d >= 1");
  CubeComplex t = cycle_complex(4);
  for (int i = 1; i < d; ++i) t = cartesian_product(t, cycle_complex(4));
  return t;
}

CubeComplex solid_cube(int d) {
  std::vector<VertexId> q(corner_count(d));
  std::iota(q.begin(), q.end(), 0u);
  return build_complex(d, q.size(), {q});
}

CubeComplex cube_sphere(int d) { return boundary_complex(solid_cube(d + 1)); }

GlueResult glue(const CubeComplex& a, const CubeComplex& b, const VertexMap& m, bool validate_result) {
  std::vector<VertexId> a_to_b(a.n_vertices(), kNone), b_to_a(b.n_vertices(), kNone);
  for (auto [x, y] : m) {
    if (x >= a.n_vertices() || y >= b.n_vertices()) throw PreconditionError("vertex map out of range");
    if (a_to_b[x] != kNone || b_to_a[y] != kNone) throw PreconditionError("vertex map is not injective");
    a_to_b[x] = y;
    b_to_a[y] = x;
  }
  // The identified subcomplexes must correspond cell by cell.
  const int top = std::min(a.dim(), b.dim());
  for (int k = 1; k <= std::max(a.dim(), b.dim()); ++k) {
    std::size_t in_a = 0, in_b = 0;
    std::vector<VertexId> img;
    for (std::size_t i = 0; i < a.count(k); ++i) {
      auto q = a.cell(k, i);
      img.clear();
      for (VertexId v : q) img.push_back(a_to_b[v]);
      if (std::find(img.begin(), img.end(), kNone) != img.end()) continue;
      ++in_a;
      if (k > top || !b.find(img))
        throw PreconditionError("vertex map is not a cell isomorphism: a " + std::to_string(k) +
                                "-cell of the first complex has no image");
    }
    for (std::size_t i = 0; i < b.count(k); ++i) {
      auto q = b.cell(k, i);
      if (std::all_of(q.begin(), q.end(), [&](VertexId v) { return b_to_a[v] != kNone; })) ++in_b;
    }
    if (in_a != in_b) throw PreconditionError("vertex map is not a cell isomorphism on the seam");
  }
  GlueResult r;
  r.from_b.resize(b.n_vertices());
  VertexId next = static_cast<VertexId>(a.n_vertices());
  for (VertexId y = 0; y < b.n_vertices(); ++y) r.from_b[y] = b_to_a[y] != kNone ? b_to_a[y] : next++;
  auto cells = maximal_arrays(a);
  for (auto q : maximal_arrays(b)) {
    for (auto& v : q) v = r.from_b[v];
    cells.push_back(std::move(q));
  }
  r.complex = build_complex(std::max(a.dim(), b.dim()), next, cells);
  if (validate_result) require_valid(r.complex, "glue");
  return r;
}

CubeComplex identify(const CubeComplex& c, const std::vector<std::pair<VertexId, VertexId>>& pairs,
                     bool validate_result) {
  std::vector<VertexId> parent(c.n_vertices());
  std::iota(parent.begin(), parent.end(), 0u);
  auto root = [&](VertexId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [x, y] : pairs) {
    if (x >= c.n_vertices() || y >= c.n_vertices()) throw PreconditionError("vertex out of range");
    VertexId rx = root(x), ry = root(y);
    if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
  }
  std::vector<VertexId> id(c.n_vertices());
  VertexId next = 0;
  for (VertexId v = 0; v < c.n_vertices(); ++v) id[v] = root(v) == v ? next++ : kNone;
  for (VertexId v = 0; v < c.n_vertices(); ++v) id[v] = id[root(v)];
  auto cells = maximal_arrays(c);
  for (auto& q : cells) {
    for (auto& v : q) v = id[v];
    std::vector<VertexId> s(q);
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw PreconditionError("identification collapses a cell");
  }
  auto out = build_complex(c.dim(), next, cells);
  if (validate_result) require_valid(out, "identify");
  return out;
}

Subcomplex subcomplex_of(const std::vector<std::vector<VertexId>>& cells, int dim) {
  std::vector<VertexId> verts;
  for (const auto& q : cells) verts.insert(verts.end(), q.begin(), q.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::map<VertexId, VertexId> local;
  for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<VertexId>(i);
  auto relabeled = cells;
  for (auto& q : relabeled)
    for (auto& v : q) v = local[v];
  return {build_complex(dim, verts.size(), relabeled), verts};
}

Subcomplex boundary_subcomplex(const CubeComplex& c) {
  const int d = c.top_dim();
  if (d < 1) return {build_complex(0, 0, {}), {}};
  std::vector<std::uint32_t> uses(c.count(d - 1), 0);
  for (std::size_t i = 0; i < c.count(d); ++i) {
    auto q = c.cell(d, i);
    for (int axis = 0; axis < d; ++axis)
      for (int side = 0; side < 2; ++side) ++uses[*c.find(cube_facet(q, axis, side))];
  }
  std::vector<std::vector<VertexId>> cells;
  for (std::size_t i = 0; i < uses.size(); ++i)
    if (uses[i] == 1) {
      if (d == 1) {
        cells.push_back({static_cast<VertexId>(i)});
      } else {
        auto f = c.cell(d - 1, i);
        cells.emplace_back(f.begin(), f.end());
      }
    }
  return subcomplex_of(cells, std::max(d - 1, 0));
}

CubeComplex boundary_complex(const CubeComplex& c) { return boundary_subcomplex(c).complex; }

CubeComplex remove_facet(const CubeComplex& c, std::size_t facet) {
  const int d = c.top_dim();
  if (d < 1 || facet >= c.count(d)) throw PreconditionError("facet index out of range");
  std::vector<std::vector<VertexId>> cells;
  for (auto [k, i] : c.maximal_cells()) {
    if (k == d && i == facet) continue;
    auto q = c.cell(k, i);
    cells.emplace_back(q.begin(), q.end());
  }
  auto f = c.cell(d, facet);
  for (int axis = 0; axis < d; ++axis)
    for (int side = 0; side < 2; ++side) cells.push_back(cube_facet(f, axis, side));
  return build_complex(c.dim(), c.n_vertices(), cells);
}

EdgeCut cut_along_edges(const CubeComplex& s, const std::vector<std::uint32_t>& edges) {
  OrientedSurface o = orient_surface(s);
  std::vector<char> cut(s.count(1), 0);
  for (auto e : edges) {
    if (e >= cut.size()) throw PreconditionError("edge index out of range");
    cut[e] = 1;
  }
  const std::size_t ns = o.cycle.size();
  EdgeCut r;
  r.cycles = o.cycle;
  r.new_cycles = o.cycle;
  r.parent.resize(s.n_vertices());
  std::iota(r.parent.begin(), r.parent.end(), 0u);
  // Squares around each vertex, as (square, slot).
  std::vector<std::vector<std::pair<std::uint32_t, int>>> around(s.n_vertices());
  for (std::uint32_t q = 0; q < ns; ++q)
    for (int t = 0; t < 4; ++t) around[o.cycle[q][t]].emplace_back(q, t);
  VertexId next = static_cast<VertexId>(s.n_vertices());
  std::map<std::uint32_t, std::uint32_t> parent;
  for (VertexId v = 0; v < s.n_vertices(); ++v) {
    const auto& ar = around[v];
    if (ar.empty()) continue;
    parent.clear();
    for (auto [q, t] : ar) parent[q] = q;
    auto root = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto e : o.vertex_edges_cache[v]) {
      if (cut[e]) continue;
      auto [p, q] = o.edge_sq[e];
      if (p == kNone || q == kNone) continue;
      auto rp = root(p), rq = root(q);
      if (rp != rq) parent[std::max(rp, rq)] = std::min(rp, rq);
    }
    std::map<std::uint32_t, VertexId> group_id;
    for (auto [q, t] : ar) {
      auto g = root(q);
      auto it = group_id.find(g);
      if (it == group_id.end()) {
        VertexId id = group_id.empty() ? v : next++;
        if (id != v) r.parent.push_back(v);
        it = group_id.emplace(g, id).first;
      }
      r.new_cycles[q][t] = it->second;
    }
  }
  std::vector<std::vector<VertexId>> cells;
  for (const auto& c : r.new_cycles) cells.push_back(quad_of(c));
  for (auto [k, i] : s.maximal_cells())
    if (k != 2) {
      if (k == 0) {
        cells.push_back({static_cast<VertexId>(i)});
      } else {
        auto q = s.cell(k, i);
        cells.emplace_back(q.begin(), q.end());
      }
    }
  r.complex = build_complex(2, next, cells);
  return r;
}

CurveCut cut_along_curve(const CubeComplex& s, const std::vector<VertexId>& curve) {
  const std::size_t n = curve.size();
  if (n < 3) throw PreconditionError("curve needs at least three vertices");
  std::vector<VertexId> sorted(curve);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw PreconditionError("curve is not simple");
  OrientedSurface o = orient_surface(s);
  std::vector<std::uint32_t> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    edges[i] = o.edge_between(curve[i], curve[(i + 1) % n]);
    if (edges[i] == kNone) throw PreconditionError("curve step is not an edge");
  }
  EdgeCut ec = cut_along_edges(s, edges);
  auto side_squares = [&](std::size_t i) {
    auto e = edges[i];
    auto [p, q] = o.edge_sq[e];
    if (p == kNone || q == kNone) throw PreconditionError("curve runs along the boundary");
    int t = o.slot(p, e);
    bool p_left = o.cycle[p][t] == curve[i];
    return p_left ? std::pair{p, q} : std::pair{q, p};
  };
  auto id_in = [&](std::uint32_t q, VertexId v) {
    for (int t = 0; t < 4; ++t)
      if (o.cycle[q][t] == v) return ec.new_cycles[q][t];
    return kNone;
  };
  CurveCut r;
  for (std::size_t i = 0; i < n; ++i) {
    auto [l, rr] = side_squares(i);
    auto [lp, rp] = side_squares((i + n - 1) % n);
    VertexId left = id_in(l, curve[i]), right = id_in(rr, curve[i]);
    if (left == right || id_in(lp, curve[i]) != left || id_in(rp, curve[i]) != right)
      throw PreconditionError("curve has no two-sided regular neighborhood at vertex " +
                              std::to_string(curve[i]));
    r.left.push_back(left);
    r.right.push_back(right);
  }
  r.complex = std::move(ec.complex);
  require_valid(r.complex, "cut along curve (non-regular neighborhood)");
  return r;
}

}  // namespace cubesphere
