#include "cubesphere/basis.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "chords.hpp"
#include "cubesphere/error.hpp"
#include "cubesphere/homology.hpp"

namespace cubesphere {

std::vector<std::size_t> CurveBasis::lengths() const {
  std::vector<std::size_t> out;
  for (const auto& c : curves) out.push_back(c.crossings.size());
  return out;
}

std::vector<std::size_t> EdgePathBasis::lengths() const {
  std::vector<std::size_t> out;
  for (const auto& c : curves) out.push_back(c.size());
  return out;
}

namespace {

struct Side {
  std::uint32_t sq;
  int slot;
  bool operator==(const Side&) const = default;
};

// From the end vertex of an open side, turn through closed edges until the next open side.
Side next_side(const OrientedSurface& s, const std::vector<char>& open, Side from,
               std::vector<std::pair<std::uint32_t, std::uint32_t>>* crossed) {
  std::uint32_t q = from.sq;
  int t = (from.slot + 1) % 4;
  for (std::size_t guard = 0; guard <= s.cycle.size() * 4; ++guard) {
    auto e = s.sq_edges[q][t];
    if (open[e]) return {q, t};
    if (crossed) crossed->emplace_back(q, e);
    auto r = s.other_square(e, q);
    q = r;
    t = (s.slot(r, e) + 1) % 4;
  }
  throw ValidationError("corner walk did not return to the boundary");
}

class Peeler {
 public:
  explicit Peeler(const OrientedSurface& s) : s_(s), open_(s.edge_ends.size(), 1) {}

  std::vector<Side> initial_boundary() {
    // Squares joined along a dual spanning tree form a disk.
    const std::size_t ns = s_.cycle.size();
    std::vector<char> seen(ns, 0);
    std::queue<std::uint32_t> bfs;
    seen[0] = 1;
    bfs.push(0);
    while (!bfs.empty()) {
      auto q = bfs.front();
      bfs.pop();
      for (int t = 0; t < 4; ++t) {
        auto e = s_.sq_edges[q][t];
        auto r = s_.other_square(e, q);
        if (seen[r]) continue;
        seen[r] = 1;
        open_[e] = 0;
        bfs.push(r);
      }
    }
    std::vector<Side> bd;
    Side start{kNone, 0};
    for (std::uint32_t q = 0; q < ns && start.sq == kNone; ++q)
      for (int t = 0; t < 4; ++t)
        if (open_[s_.sq_edges[q][t]]) {
          start = {q, t};
          break;
        }
    if (start.sq == kNone) return bd;
    Side cur = start;
    do {
      bd.push_back(cur);
      cur = next_side(s_, open_, cur, nullptr);
    } while (!(cur == start));
    return bd;
  }

  std::uint32_t edge(Side x) const { return s_.sq_edges[x.sq][x.slot]; }

  void zip(std::vector<Side>& bd) {
    std::vector<Side> st;
    for (auto x : bd) {
      if (!st.empty() && edge(st.back()) == edge(x)) {
        open_[edge(x)] = 0;
        st.pop_back();
      } else {
        st.push_back(x);
      }
    }
    std::size_t f = 0;
    while (st.size() - f >= 2 && edge(st[f]) == edge(st.back())) {
      open_[edge(st[f])] = 0;
      ++f;
      st.pop_back();
    }
    bd.assign(st.begin() + f, st.end());
  }

  // Arc running just inside the boundary from the middle of bd[from] to the middle of bd[to].
  SurfaceCurve arc(const std::vector<Side>& bd, std::size_t from, std::size_t to, std::uint32_t depth) {
    const std::size_t n = bd.size();
    SurfaceCurve c;
    c.crossings.push_back({edge(bd[from]), kNone, depth});
    std::vector<std::pair<std::uint32_t, std::uint32_t>> crossed;
    for (std::size_t i = from; i != to; i = (i + 1) % n) {
      VertexId y = s_.cycle[bd[i].sq][(bd[i].slot + 1) % 4];
      crossed.clear();
      Side nx = next_side(s_, open_, bd[i], &crossed);
      if (!(nx == bd[(i + 1) % n])) throw ValidationError("boundary word out of sync with the surface");
      for (auto [q, e] : crossed) {
        c.squares.push_back(q);
        c.crossings.push_back({e, y, depth});
      }
    }
    c.squares.push_back(bd[to].sq);
    return c;
  }

  void close(std::uint32_t e) { open_[e] = 0; }

 private:
  const OrientedSurface& s_;
  std::vector<char> open_;
};

struct Handle {
  std::size_t a, b, k, l;  // u at a, u' at b, v at k inside (a,b), v' at l outside
};

// Picks interleaved pairs with short spans first.
std::optional<Handle> find_handle(const std::vector<Side>& bd, const Peeler& p, std::size_t n_edges) {
  const std::size_t n = bd.size();
  std::vector<std::array<std::size_t, 2>> pos(n_edges, {kNone, kNone});
  for (std::size_t i = 0; i < n; ++i) {
    auto& ps = pos[p.edge(bd[i])];
    (ps[0] == kNone ? ps[0] : ps[1]) = i;
  }
  auto inside = [&](std::size_t from, std::size_t to, std::size_t x) {  // x strictly inside the forward arc
    std::size_t d = (x + n - from) % n, len = (to + n - from) % n;
    return d > 0 && d < len;
  };
  std::vector<std::pair<std::size_t, std::size_t>> cand;  // (span, first position)
  for (std::size_t i = 0; i < n; ++i) {
    auto ps = pos[p.edge(bd[i])];
    if (ps[0] != i) continue;
    std::size_t len = ps[1] - ps[0];
    cand.emplace_back(std::min(len, n - len), i);
  }
  std::sort(cand.begin(), cand.end());
  for (auto [span, i] : cand) {
    auto ps = pos[p.edge(bd[i])];
    std::size_t a = ps[0], b = ps[1];
    if (b - a > n - (b - a)) std::swap(a, b);
    for (std::size_t k = (a + 1) % n; k != b; k = (k + 1) % n) {
      auto qs = pos[p.edge(bd[k])];
      std::size_t l = qs[0] == k ? qs[1] : qs[0];
      if (!inside(a, b, l)) return Handle{a, b, k, l};
    }
  }
  return std::nullopt;
}

std::vector<Side> arc_slice(const std::vector<Side>& bd, std::size_t from, std::size_t to) {
  std::vector<Side> out;
  for (std::size_t i = (from + 1) % bd.size(); i != to; i = (i + 1) % bd.size()) out.push_back(bd[i]);
  return out;
}

}  // namespace

CurveBasis canonical_basis(const CubeComplex& q) {
  auto s = orient_surface(q);
  if (!s.closed || !s.orientable || s.components != 1)
    throw PreconditionError("canonical_basis needs a connected closed orientable surface");
  const long long chi = q.fvector().euler();
  CurveBasis out;
  out.genus = static_cast<std::size_t>((2 - chi) / 2);
  Peeler peel(s);
  auto bd = peel.initial_boundary();
  peel.zip(bd);
  for (std::size_t i = 1; !bd.empty(); ++i) {
    auto h = find_handle(bd, peel, s.edge_ends.size());
    if (!h || i > out.genus) throw ValidationError("boundary word has no interleaved pair");
    // Later pairs run closer to the boundary; within a pair beta stays shallower than alpha.
    auto da = static_cast<std::uint32_t>(2 * (out.genus - i) + 2);
    out.curves.push_back(peel.arc(bd, h->a, h->b, da));
    out.curves.push_back(peel.arc(bd, h->k, h->l, da - 1));
    auto A = arc_slice(bd, h->a, h->k), B = arc_slice(bd, h->k, h->b);
    auto C = arc_slice(bd, h->b, h->l), D = arc_slice(bd, h->l, h->a);
    peel.close(peel.edge(bd[h->a]));
    peel.close(peel.edge(bd[h->k]));
    bd = A;
    bd.insert(bd.end(), D.begin(), D.end());
    bd.insert(bd.end(), C.begin(), C.end());
    bd.insert(bd.end(), B.begin(), B.end());
    peel.zip(bd);
  }
  if (out.curves.size() != 2 * out.genus) throw ValidationError("peeling produced the wrong number of handles");
  out.intersections = curve_intersections(q, out.curves);
  return out;
}

std::vector<std::vector<int>> curve_intersections(const CubeComplex& q, const std::vector<SurfaceCurve>& curves) {
  auto s = orient_surface(q);
  std::uint32_t maxd = 0;
  for (const auto& c : curves)
    for (const auto& x : c.crossings) maxd = std::max(maxd, x.depth);
  const long long W = 2LL * (maxd + 1);
  auto key = [&](std::uint32_t sq, const Crossing& x) {
    int t = s.slot(sq, x.edge);
    if (t < 0) throw ValidationError("curve arc leaves its square");
    VertexId from = s.cycle[sq][t];
    long long p = x.near == kNone ? W / 2 : x.near == from ? x.depth : W - x.depth;
    return t * W + p;
  };
  struct Chord {
    std::size_t curve;
    long long a, b;
  };
  std::vector<std::vector<Chord>> per(q.count(2));
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const std::size_t m = c.crossings.size();
    for (std::size_t k = 0; k < m; ++k) {
      auto sq = c.squares[k];
      long long a = key(sq, c.crossings[k]), b = key(sq, c.crossings[(k + 1) % m]);
      per[sq].push_back({i, std::min(a, b), std::max(a, b)});
    }
  }
  std::vector<std::vector<int>> m(curves.size(), std::vector<int>(curves.size(), 0));
  std::vector<std::pair<long long, long long>> ends;
  for (const auto& chords : per) {
    ends.clear();
    for (const auto& c : chords) ends.emplace_back(c.a, c.b);
    detail::interleaved_pairs(ends, [&](std::size_t x, std::size_t y) {
      auto i = chords[x].curve, j = chords[y].curve;
      ++m[i][j];
      if (i != j) ++m[j][i];
    });
  }
  return m;
}

CrossingBound crossing_bound(const std::vector<SurfaceCurve>& curves) {
  CrossingBound r;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::unordered_map<std::uint32_t, std::size_t> count;
    for (const auto& x : curves[i].crossings) {
      auto c = ++count[x.edge];
      if (c > r.max) r = {c, i, x.edge};
    }
  }
  return r;
}

bool canonical_pattern(const std::vector<std::vector<int>>& m) {
  if (m.size() % 2) return false;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      bool partner = i != j && i / 2 == j / 2;
      if (m[i][j] != (partner ? 1 : 0)) return false;
    }
  return true;
}

namespace {

// Primal spanning tree, dual spanning tree on the remaining edges, and the 2g leftover edges.
struct TreeCotree {
  std::vector<std::uint32_t> up_edge;    // per vertex, tree edge toward the root
  std::vector<std::uint32_t> sq_parent;  // per square, cotree edge toward the root square
  std::vector<std::uint32_t> sq_order;   // cotree BFS order
  std::vector<std::uint32_t> leftover;
};

TreeCotree tree_cotree(const OrientedSurface& s) {
  TreeCotree t;
  const std::size_t nv = s.n_vertices, ne = s.edge_ends.size(), ns = s.cycle.size();
  std::vector<char> used(ne, 0);
  t.up_edge.assign(nv, kNone);
  std::vector<char> seen(nv, 0);
  std::queue<VertexId> bfs;
  seen[0] = 1;
  bfs.push(0);
  while (!bfs.empty()) {
    auto v = bfs.front();
    bfs.pop();
    for (auto e : s.vertex_edges_cache[v]) {
      VertexId w = s.edge_ends[e][0] == v ? s.edge_ends[e][1] : s.edge_ends[e][0];
      if (seen[w]) continue;
      seen[w] = 1;
      t.up_edge[w] = e;
      used[e] = 1;
      bfs.push(w);
    }
  }
  t.sq_parent.assign(ns, kNone);
  std::vector<char> sseen(ns, 0);
  std::queue<std::uint32_t> sb;
  sseen[0] = 1;
  sb.push(0);
  while (!sb.empty()) {
    auto q = sb.front();
    sb.pop();
    t.sq_order.push_back(q);
    for (auto e : s.sq_edges[q]) {
      if (used[e]) continue;
      auto r = s.other_square(e, q);
      if (sseen[r]) continue;
      sseen[r] = 1;
      used[e] = 2;
      t.sq_parent[r] = e;
      sb.push(r);
    }
  }
  for (std::uint32_t e = 0; e < ne; ++e)
    if (!used[e]) t.leftover.push_back(e);
  return t;
}

// Oriented edge list (edge, +1 when run from the smaller endpoint) of the loop closed by a leftover edge.
std::vector<std::pair<std::uint32_t, int>> tree_loop(const OrientedSurface& s, const TreeCotree& t,
                                                     std::uint32_t e) {
  auto up = [&](VertexId v) {
    std::vector<std::pair<std::uint32_t, int>> path;
    while (t.up_edge[v] != kNone) {
      auto f = t.up_edge[v];
      VertexId w = s.edge_ends[f][0] == v ? s.edge_ends[f][1] : s.edge_ends[f][0];
      path.emplace_back(f, s.edge_ends[f][0] == v ? 1 : -1);
      v = w;
    }
    return path;
  };
  VertexId a = s.edge_ends[e][0], b = s.edge_ends[e][1];
  auto pa = up(a), pb = up(b);
  std::vector<std::pair<std::uint32_t, int>> loop;
  for (auto it = pa.rbegin(); it != pa.rend(); ++it) loop.emplace_back(it->first, -it->second);
  loop.emplace_back(e, 1);
  loop.insert(loop.end(), pb.begin(), pb.end());
  return loop;
}

bool unimodular(const std::vector<std::vector<long long>>& a, std::string& detail) {
  BoundaryMatrix m;
  m.rows = a.size();
  m.cols = a.empty() ? 0 : a[0].size();
  m.columns.resize(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j)
    for (std::size_t i = 0; i < m.rows; ++i)
      if (a[i][j]) {
        m.columns[j].rows.push_back(static_cast<std::uint32_t>(i));
        m.columns[j].values.push_back(static_cast<int>(a[i][j]));
      }
  auto r = matrix_rank(m, Coefficients::integers());
  if (r.rank != m.rows || m.rows != m.cols) {
    detail = "coordinate matrix has rank " + std::to_string(r.rank) + " of " + std::to_string(m.rows);
    return false;
  }
  if (!r.torsion.empty()) {
    detail = "coordinate matrix has invariant factor " + std::to_string(r.torsion.back());
    return false;
  }
  return true;
}

}  // namespace

BasisCheck verify_curve_basis(const CubeComplex& q, const CurveBasis& b) {
  BasisCheck r;
  auto s = orient_surface(q);
  r.intersections = curve_intersections(q, b.curves);
  r.pattern = canonical_pattern(r.intersections);
  if (!r.pattern) r.detail = "intersection pattern is not canonical";
  auto t = tree_cotree(s);
  // Algebraic intersections with the tree-cotree loops.
  std::vector<std::vector<std::pair<std::uint32_t, int>>> on_edge(s.edge_ends.size());
  for (std::size_t j = 0; j < t.leftover.size(); ++j)
    for (auto [e, sign] : tree_loop(s, t, t.leftover[j])) on_edge[e].emplace_back(static_cast<std::uint32_t>(j), sign);
  auto forward_square = [&](std::uint32_t e) {
    auto q0 = s.edge_sq[e][0];
    int k = s.slot(q0, e);
    return s.cycle[q0][k] == s.edge_ends[e][0] ? q0 : s.edge_sq[e][1];
  };
  r.coordinates.assign(b.curves.size(), std::vector<long long>(t.leftover.size(), 0));
  for (std::size_t i = 0; i < b.curves.size(); ++i) {
    const auto& c = b.curves[i];
    const std::size_t m = c.crossings.size();
    for (std::size_t k = 0; k < m; ++k) {
      auto e = c.crossings[k].edge;
      int into_left = c.squares[k] == forward_square(e) ? 1 : -1;
      for (auto [j, sign] : on_edge[e]) r.coordinates[i][j] += sign * into_left;
    }
  }
  std::string why;
  r.unimodular = unimodular(r.coordinates, why);
  if (!r.unimodular && r.detail.empty()) r.detail = why;
  return r;
}

namespace {

// Cyclic order of the neighbours of v taken from its squares.
std::vector<VertexId> rotation_at(const CubeComplex& c, const std::vector<std::vector<std::uint32_t>>& star,
                                  VertexId v) {
  std::unordered_map<VertexId, std::vector<VertexId>> adj;
  for (auto q : star[v]) {
    auto k = c.cell(2, q);
    std::size_t p = std::find(k.begin(), k.end(), v) - k.begin();
    VertexId a = k[p ^ 1], b = k[p ^ 2];
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<VertexId> order;
  if (adj.empty()) return order;
  VertexId start = adj.begin()->first, prev = kNone, cur = start;
  do {
    order.push_back(cur);
    const auto& nb = adj[cur];
    VertexId nx = nb[0] != prev ? nb[0] : (nb.size() > 1 ? nb[1] : kNone);
    prev = cur;
    cur = nx;
  } while (cur != start && cur != kNone && order.size() <= adj.size());
  return order;
}

}  // namespace

BasisCheck verify_basis(const CubeComplex& c, const EdgePathBasis& b) {
  BasisCheck r;
  const std::size_t nc = b.curves.size();
  r.intersections.assign(nc, std::vector<int>(nc, 0));
  std::vector<std::vector<std::uint32_t>> star(c.n_vertices());
  for (std::uint32_t q = 0; q < c.count(2); ++q)
    for (auto v : c.cell(2, q)) star[v].push_back(q);
  std::unordered_map<VertexId, std::vector<std::pair<std::size_t, std::size_t>>> where;
  bool simple = true;
  for (std::size_t i = 0; i < nc; ++i) {
    const auto& p = b.curves[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      auto& w = where[p[k]];
      for (auto [j, kk] : w)
        if (j == i) simple = false;
      w.emplace_back(i, k);
    }
  }
  bool transversal = true;
  for (auto& [v, w] : where)
    for (std::size_t x = 0; x < w.size(); ++x)
      for (std::size_t y = x + 1; y < w.size(); ++y) {
        auto [i, ki] = w[x];
        auto [j, kj] = w[y];
        ++r.intersections[i][j];
        if (i != j) ++r.intersections[j][i];
        auto rot = rotation_at(c, star, v);
        auto at = [&](VertexId u) { return std::find(rot.begin(), rot.end(), u) - rot.begin(); };
        const auto &pi = b.curves[i], &pj = b.curves[j];
        long a1 = at(pi[(ki + pi.size() - 1) % pi.size()]), b1 = at(pi[(ki + 1) % pi.size()]);
        long a2 = at(pj[(kj + pj.size() - 1) % pj.size()]), b2 = at(pj[(kj + 1) % pj.size()]);
        auto between = [&](long x0, long lo, long hi) {
          long n = static_cast<long>(rot.size());
          long d = ((x0 - lo) % n + n) % n, len = ((hi - lo) % n + n) % n;
          return d > 0 && d < len;
        };
        if (between(a2, a1, b1) == between(b2, a1, b1) || a2 == a1 || a2 == b1 || b2 == a1 || b2 == b1)
          transversal = false;
      }
  r.pattern = simple && transversal && canonical_pattern(r.intersections);
  if (!r.pattern) r.detail = !simple ? "a curve is not simple" : !transversal ? "curves touch without crossing"
                                                                              : "intersection pattern is not canonical";
  // Coordinates against the dual basis of the tree-cotree loops.
  auto s = orient_surface(c);
  if (!s.closed || !s.orientable) throw PreconditionError("verify_basis needs a closed orientable surface");
  auto t = tree_cotree(s);
  const std::size_t ne = s.edge_ends.size();
  r.coordinates.assign(nc, std::vector<long long>(t.leftover.size(), 0));
  std::vector<long long> phi(ne);
  for (std::size_t j = 0; j < t.leftover.size(); ++j) {
    std::fill(phi.begin(), phi.end(), 0);
    phi[t.leftover[j]] = 1;
    for (auto it = t.sq_order.rbegin(); it != t.sq_order.rend(); ++it) {
      auto q = *it;
      auto pe = t.sq_parent[q];
      if (pe == kNone) continue;
      long long sum = 0;
      int sp = 0;
      for (int k = 0; k < 4; ++k) {
        auto e = s.sq_edges[q][k];
        int sign = s.cycle[q][k] == s.edge_ends[e][0] ? 1 : -1;
        if (e == pe) sp = sign;
        else sum += sign * phi[e];
      }
      phi[pe] = -sum * sp;
    }
    for (std::size_t i = 0; i < nc; ++i) {
      const auto& p = b.curves[i];
      long long v = 0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        auto e = s.edge_between(p[k], p[(k + 1) % p.size()]);
        if (e == kNone) throw PreconditionError("curve " + std::to_string(i) + " is not an edge path");
        v += (p[k] == s.edge_ends[e][0] ? 1 : -1) * phi[e];
      }
      r.coordinates[i][j] = v;
    }
  }
  std::string why;
  r.unimodular = unimodular(r.coordinates, why);
  if (!r.unimodular && r.detail.empty()) r.detail = why;
  return r;
}

}  // namespace cubesphere
