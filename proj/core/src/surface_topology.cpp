#include <algorithm>
#include <functional>
#include <map>
#include <queue>

#include "cubesphere/error.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/surface.hpp"

namespace cubesphere {

int OrientedSurface::slot(std::uint32_t s, std::uint32_t e) const {
  for (int t = 0; t < 4; ++t)
    if (sq_edges[s][t] == e) return t;
  return -1;
}

std::uint32_t OrientedSurface::edge_between(VertexId a, VertexId b) const {
  if (a > b) std::swap(a, b);
  for (auto e : vertex_edges_cache[a])
    if (edge_ends[e][1] == b) return e;
  return kNone;
}

std::vector<std::vector<std::uint32_t>> OrientedSurface::vertex_edges() const { return vertex_edges_cache; }

OrientedSurface orient_surface(const CubeComplex& c) {
  if (c.dim() < 2) throw PreconditionError("surface operations need a 2-dimensional complex");
  OrientedSurface s;
  s.n_vertices = c.n_vertices();
  const std::size_t ns = c.count(2), ne = c.count(1);
  s.edge_ends.resize(ne);
  s.edge_sq.assign(ne, {kNone, kNone});
  s.vertex_edges_cache.resize(c.n_vertices());
  for (std::size_t e = 0; e < ne; ++e) {
    auto ed = c.cell(1, e);
    s.edge_ends[e] = {std::min(ed[0], ed[1]), std::max(ed[0], ed[1])};
    s.vertex_edges_cache[ed[0]].push_back(e);
    s.vertex_edges_cache[ed[1]].push_back(e);
  }
  s.cycle.resize(ns);
  s.sq_edges.resize(ns);
  bool multi = false;
  for (std::size_t q = 0; q < ns; ++q) {
    auto k = c.cell(2, q);
    s.cycle[q] = {k[0], k[1], k[3], k[2]};
    for (int t = 0; t < 4; ++t) {
      auto e = s.edge_between(s.cycle[q][t], s.cycle[q][(t + 1) % 4]);
      s.sq_edges[q][t] = e;
      auto& side = s.edge_sq[e];
      if (side[0] == kNone) side[0] = q;
      else if (side[1] == kNone) side[1] = q;
      else multi = true;
    }
  }
  s.closed = !multi;
  for (auto& side : s.edge_sq)
    if (side[1] == kNone) s.closed = false;

  // Orientation propagation: neighbors must traverse a shared edge in opposite directions.
  auto forward = [&](std::uint32_t q, std::uint32_t e) {
    int t = s.slot(q, e);
    return s.cycle[q][t] == s.edge_ends[e][0];
  };
  std::vector<int> flip(ns, 0);  // 0 unvisited, 1 keep, -1 reverse
  s.orientable = !multi;
  for (std::uint32_t start = 0; start < ns; ++start) {
    if (flip[start]) continue;
    ++s.components;
    flip[start] = 1;
    std::queue<std::uint32_t> bfs;
    bfs.push(start);
    while (!bfs.empty()) {
      auto q = bfs.front();
      bfs.pop();
      for (int t = 0; t < 4; ++t) {
        auto e = s.sq_edges[q][t];
        auto r = s.other_square(e, q);
        if (r == kNone || r == q) continue;
        bool fq = forward(q, e) == (flip[q] == 1);
        int want = (forward(r, e) == !fq) ? 1 : -1;
        if (!flip[r]) {
          flip[r] = want;
          bfs.push(r);
        } else if (flip[r] != want && s.orientable) {
          s.orientable = false;
          s.conflict_edge = e;
        }
      }
    }
  }
  for (std::size_t q = 0; q < ns; ++q)
    if (flip[q] == -1) {
      std::reverse(s.cycle[q].begin(), s.cycle[q].end());
      auto old = s.sq_edges[q];
      // Edge t joined cycle[t],cycle[t+1]; after reversal edge t joins new[t],new[t+1] = old[3-t],old[2-t].
      for (int t = 0; t < 4; ++t) s.sq_edges[q][t] = old[(2 - t + 4) % 4];
    }
  return s;
}

SurfaceInvariants surface_invariants(const CubeComplex& c) {
  if (c.top_dim() != 2) throw PreconditionError("surface_invariants needs a 2-dimensional complex");
  for (auto [k, i] : c.maximal_cells())
    if (k != 2) throw PreconditionError("complex is not pure");
  // Each vertex link must be a cycle or a path.
  std::vector<std::vector<std::pair<VertexId, VertexId>>> link(c.n_vertices());
  for (std::size_t q = 0; q < c.count(2); ++q) {
    auto k = c.cell(2, q);
    for (std::size_t p = 0; p < 4; ++p) link[k[p]].emplace_back(k[p ^ 1], k[p ^ 2]);
  }
  for (VertexId v = 0; v < c.n_vertices(); ++v) {
    std::map<VertexId, int> deg;
    std::map<VertexId, VertexId> parent;
    std::function<VertexId(VertexId)> root = [&](VertexId x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [a, b] : link[v]) {
      ++deg[a];
      ++deg[b];
      parent.emplace(a, a);
      parent.emplace(b, b);
      parent[root(a)] = root(b);
    }
    bool ok = !link[v].empty();
    for (auto [u, d] : deg)
      if (d > 2) ok = false;
    std::size_t roots = 0;
    for (auto& [u, p] : parent)
      if (root(u) == u) ++roots;
    if (!ok || roots != 1)
      throw PreconditionError("vertex " + std::to_string(v) + " has a non-surface link");
  }
  auto s = orient_surface(c);
  SurfaceInvariants r;
  r.closed = s.closed;
  r.orientable = s.orientable;
  r.conflict_edge = s.conflict_edge;
  r.components = s.components;
  r.euler = c.fvector().euler();
  if (r.closed && r.orientable) r.genus = static_cast<int>((2 * static_cast<long long>(r.components) - r.euler) / 2);
  return r;
}

}  // namespace cubesphere
