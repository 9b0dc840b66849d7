#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "cubesphere/complex.hpp"
#include "cubesphere/error.hpp"

namespace cubesphere {

namespace {

struct MaxCell {
  int k;
  std::size_t index;
  std::vector<VertexId> corners;
  std::vector<VertexId> sorted;
};

struct Star {
  std::vector<MaxCell> cells;
  std::vector<std::size_t> offset;
  std::vector<std::uint32_t> items;
  std::span<const std::uint32_t> of(VertexId v) const {
    return {items.data() + offset[v], offset[v + 1] - offset[v]};
  }
};

Star build_star(const CubeComplex& c, bool include_vertices = false) {
  Star s;
  for (auto [k, i] : c.maximal_cells()) {
    if (k == 0 && !include_vertices) continue;
    MaxCell m{k, i, {}, {}};
    if (k == 0) {
      m.corners = {static_cast<VertexId>(i)};
    } else {
      auto span = c.cell(k, i);
      m.corners.assign(span.begin(), span.end());
    }
    m.sorted = m.corners;
    std::sort(m.sorted.begin(), m.sorted.end());
    s.cells.push_back(std::move(m));
  }
  s.offset.assign(c.n_vertices() + 1, 0);
  for (const auto& m : s.cells)
    for (VertexId v : m.corners) ++s.offset[v + 1];
  std::partial_sum(s.offset.begin(), s.offset.end(), s.offset.begin());
  s.items.resize(s.offset.back());
  std::vector<std::size_t> fill(s.offset.begin(), s.offset.end() - 1);
  for (std::uint32_t id = 0; id < s.cells.size(); ++id)
    for (VertexId v : s.cells[id].corners) s.items[fill[v]++] = id;
  return s;
}

// Canonical face of `corners` spanned by vertex set `shared`, or empty if not a face.
std::vector<VertexId> face_on(const std::vector<VertexId>& corners,
                              const std::vector<VertexId>& shared) {
  std::size_t all_or = 0, all_and = ~std::size_t{0};
  for (std::size_t p = 0; p < corners.size(); ++p)
    if (std::binary_search(shared.begin(), shared.end(), corners[p])) {
      all_or |= p;
      all_and &= p;
    }
  const std::size_t free = all_or & ~all_and;
  if (shared.size() != (std::size_t{1} << std::popcount(free))) return {};
  std::vector<VertexId> face;
  face.reserve(shared.size());
  for (std::size_t c = 0; c < shared.size(); ++c) {
    std::size_t p = all_and;
    std::size_t bit = 0;
    for (std::size_t j = 0; j < 64 && (free >> j); ++j)
      if (free >> j & 1) {
        if (c >> bit & 1) p |= std::size_t{1} << j;
        ++bit;
      }
    face.push_back(corners[p]);
  }
  return canonicalize(face).corners;
}

}  // namespace

ValidationReport validate(const CubeComplex& c, std::size_t max_violations) {
  ValidationReport r;
  Star star = build_star(c);
  std::vector<VertexId> shared;
  for (VertexId v = 0; v < c.n_vertices(); ++v) {
    auto st = star.of(v);
    for (std::size_t x = 0; x < st.size(); ++x)
      for (std::size_t y = x + 1; y < st.size(); ++y) {
        const MaxCell& a = star.cells[st[x]];
        const MaxCell& b = star.cells[st[y]];
        shared.clear();
        std::set_intersection(a.sorted.begin(), a.sorted.end(), b.sorted.begin(), b.sorted.end(),
                              std::back_inserter(shared));
        if (shared.front() != v || shared.size() < 2) continue;
        auto fa = face_on(a.corners, shared);
        auto fb = face_on(b.corners, shared);
        std::string reason;
        if (fa.empty() || fb.empty())
          reason = "shared vertex set is not a face (shared diagonal)";
        else if (fa != fb)
          reason = "shared vertex set carries two different face structures";
        if (reason.empty()) continue;
        r.is_complex = false;
        if (r.violations.size() < max_violations)
          r.violations.push_back({a.k, a.index, b.k, b.index, reason});
      }
  }
  r.is_closed_pseudomanifold = r.is_complex && pseudomanifold_check(c);
  return r;
}

bool pseudomanifold_check(const CubeComplex& c) {
  const int d = c.top_dim();
  if (d < 1) return false;
  for (auto [k, i] : c.maximal_cells())
    if (k != d) return false;
  const std::size_t nf = c.count(d);
  std::vector<std::vector<std::uint32_t>> ridge_facets(c.count(d - 1));
  for (std::size_t i = 0; i < nf; ++i) {
    auto q = c.cell(d, i);
    if (d == 1) {
      ridge_facets[q[0]].push_back(i);
      ridge_facets[q[1]].push_back(i);
      continue;
    }
    for (int axis = 0; axis < d; ++axis)
      for (int side = 0; side < 2; ++side)
        ridge_facets[*c.find(cube_facet(q, axis, side))].push_back(i);
  }
  std::vector<std::uint32_t> parent(nf);
  std::iota(parent.begin(), parent.end(), 0u);
  auto root = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& rf : ridge_facets) {
    if (rf.size() != 2) return false;
    parent[root(rf[0])] = root(rf[1]);
  }
  for (std::size_t i = 0; i < nf; ++i)
    if (root(i) != root(0)) return false;
  return true;
}

int SimplicialComplex::dim() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

namespace {

SimplicialComplex link_from_star(const Star& star, VertexId v) {
  SimplicialComplex l;
  std::map<VertexId, int> local;
  std::vector<std::vector<VertexId>> raw;
  for (auto id : star.of(v)) {
    const auto& m = star.cells[id];
    if (m.k == 0) continue;
    std::size_t p = std::find(m.corners.begin(), m.corners.end(), v) - m.corners.begin();
    std::vector<VertexId> nb;
    for (int j = 0; j < m.k; ++j) nb.push_back(m.corners[p ^ (std::size_t{1} << j)]);
    for (VertexId u : nb) local.emplace(u, 0);
    raw.push_back(std::move(nb));
  }
  int idx = 0;
  for (auto& [u, i] : local) {
    i = idx++;
    l.vertices.push_back(u);
  }
  for (const auto& nb : raw) {
    std::vector<int> s;
    for (VertexId u : nb) s.push_back(local[u]);
    std::sort(s.begin(), s.end());
    l.simplices.push_back(std::move(s));
  }
  std::sort(l.simplices.begin(), l.simplices.end());
  return l;
}

bool connected(int nv, const std::vector<std::vector<int>>& simplices) {
  if (nv == 0) return false;
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& s : simplices)
    for (std::size_t i = 1; i < s.size(); ++i) parent[root(s[i])] = root(s[0]);
  for (int i = 0; i < nv; ++i)
    if (root(i) != root(0)) return false;
  return true;
}

// Graph given by edges is a single cycle through all nv vertices.
bool single_cycle(int nv, const std::vector<std::vector<int>>& edges) {
  if (nv < 3) return false;
  std::vector<int> deg(nv, 0);
  for (const auto& e : edges) {
    if (e.size() != 2) return false;
    ++deg[e[0]];
    ++deg[e[1]];
  }
  for (int x : deg)
    if (x != 2) return false;
  return connected(nv, edges);
}

std::string link_sphere_failure(const SimplicialComplex& l, int d) {
  const int nv = static_cast<int>(l.vertices.size());
  if (d == 1) return nv == 2 && l.simplices.size() == 2 ? "" : "vertex is not in exactly two edges";
  if (d == 2) return single_cycle(nv, l.simplices) ? "" : "link is not a single cycle";
  for (const auto& s : l.simplices)
    if (s.size() != 3) return "link is not a pure 2-complex";
  if (!connected(nv, l.simplices)) return "link is disconnected";
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& s : l.simplices) {
    ++edge_count[{s[0], s[1]}];
    ++edge_count[{s[0], s[2]}];
    ++edge_count[{s[1], s[2]}];
  }
  for (const auto& [e, n] : edge_count)
    if (n != 2) return "link edge not in exactly two triangles";
  long long chi = nv - static_cast<long long>(edge_count.size()) + static_cast<long long>(l.simplices.size());
  if (chi != 2) return "link Euler characteristic is not 2";
  std::vector<std::vector<std::vector<int>>> sub(nv);
  for (const auto& s : l.simplices)
    for (int i = 0; i < 3; ++i) {
      std::vector<int> opp;
      for (int j = 0; j < 3; ++j)
        if (j != i) opp.push_back(s[j]);
      sub[s[i]].push_back(opp);
    }
  for (int u = 0; u < nv; ++u) {
    std::map<int, int> loc;
    for (auto& e : sub[u])
      for (int& x : e) loc.emplace(x, 0);
    int idx = 0;
    for (auto& [x, i] : loc) i = idx++;
    auto edges = sub[u];
    for (auto& e : edges)
      for (int& x : e) x = loc[x];
    if (!single_cycle(idx, edges)) return "link of a link vertex is not a cycle";
  }
  return "";
}

}  // namespace

SimplicialComplex vertex_link(const CubeComplex& c, VertexId v) {
  if (v >= c.n_vertices()) throw PreconditionError("vertex out of range");
  return link_from_star(build_star(c), v);
}

ManifoldReport manifold_check(const CubeComplex& c, int d) {
  ManifoldReport r;
  if (c.top_dim() != d) {
    r.reason = "complex dimension differs from " + std::to_string(d);
    return r;
  }
  if (!pseudomanifold_check(c)) {
    r.reason = "not a closed pseudomanifold";
    return r;
  }
  if (d > 3) {
    r.ok = true;
    r.reason = "pseudomanifold only; links not checked above dimension 3";
    return r;
  }
  Star star = build_star(c);
  for (VertexId v = 0; v < c.n_vertices(); ++v) {
    std::string why = link_sphere_failure(link_from_star(star, v), d);
    if (!why.empty()) {
      r.bad_vertex = v;
      r.reason = why;
      r.links_checked = true;
      return r;
    }
  }
  r.ok = true;
  r.links_checked = true;
  return r;
}

BoundReport upper_bound_checks(const CubeComplex& c) {
  BoundReport r;
  const int d = c.top_dim();
  if (d < 1) return r;
  const double f0 = static_cast<double>(c.n_vertices());
  const double fd = static_cast<double>(c.count(d));
  r.diagonal_bound = f0 * (f0 - 1) / static_cast<double>(corner_count(d));
  r.diagonal_ok = fd <= r.diagonal_bound;
  if (d == 3 && pseudomanifold_check(c)) {
    r.quadratic_checked = true;
    r.quadratic_bound = f0 * f0 / 24.0;
    r.quadratic_ok = fd <= r.quadratic_bound;
  }
  return r;
}

std::vector<std::uint8_t> bipartite_classes(std::size_t n,
                                            const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<std::vector<VertexId>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::uint8_t> color(n, 2);
  for (VertexId s = 0; s < n; ++s) {
    if (color[s] != 2) continue;
    color[s] = 0;
    std::queue<VertexId> q;
    q.push(s);
    while (!q.empty()) {
      VertexId u = q.front();
      q.pop();
      for (VertexId w : adj[u]) {
        if (color[w] == 2) {
          color[w] = color[u] ^ 1;
          q.push(w);
        } else if (color[w] == color[u]) {
          throw PreconditionError("odd cycle through edge " + std::to_string(u) + "-" +
                                  std::to_string(w));
        }
      }
    }
  }
  return color;
}

std::vector<std::uint8_t> bipartite_classes(const CubeComplex& c) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (std::size_t i = 0; i < c.count(1); ++i) edges.emplace_back(c.cell(1, i)[0], c.cell(1, i)[1]);
  return bipartite_classes(c.n_vertices(), edges);
}

}  // namespace cubesphere
