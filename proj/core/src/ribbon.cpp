#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "chords.hpp"
#include "cubesphere/basis.hpp"
#include "cubesphere/error.hpp"
#include "cubesphere/transforms.hpp"

namespace cubesphere {

namespace {

using Real = long double;

struct Point {
  Real x, y;
};

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Curves drawn as straight chords inside each square of Q, with all crossing points numbered.
struct Arrangement {
  std::size_t n_vertices = 0;  // ids of Q, crossing points, then chord intersections
  std::vector<std::vector<std::pair<long long, VertexId>>> edge_points;  // per Q-edge, keyed from the smaller end
  struct Chord {
    std::uint32_t square;
    VertexId a, b;
    Point pa, pb;
    long long ka, kb;  // positions around the square boundary
    std::vector<std::pair<Real, VertexId>> inner;  // intersections ordered from a to b
  };
  std::vector<Chord> chords;
  std::vector<std::vector<std::size_t>> curve_chords;  // per curve, chord k runs crossing k -> k+1
  std::vector<std::vector<std::size_t>> square_chords;
  std::size_t crossings = 0;
  std::size_t intersections = 0;
  std::size_t markers = 0;
  long long W = 0;
};

// The boundary of a square laid out on the unit circle; position runs over [0, 4W).
Point on_circle(long long position, long long W) {
  Real th = 2 * std::acos(Real(-1)) * static_cast<Real>(position) / static_cast<Real>(4 * W);
  return {std::cos(th), std::sin(th)};
}

Arrangement arrange(const OrientedSurface& s, const std::vector<SurfaceCurve>& curves) {
  Arrangement ar;
  std::uint32_t maxd = 0;
  for (const auto& c : curves)
    for (const auto& x : c.crossings) maxd = std::max(maxd, x.depth);
  const long long W = 2LL * (maxd + 1);
  VertexId next = static_cast<VertexId>(s.n_vertices);
  ar.edge_points.resize(s.edge_ends.size());
  std::vector<std::vector<VertexId>> ids(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (const auto& x : curves[i].crossings) {
      VertexId id = next++;
      ids[i].push_back(id);
      long long key = x.near == kNone ? W / 2 : x.near == s.edge_ends[x.edge][0] ? x.depth : W - x.depth;
      ar.edge_points[x.edge].emplace_back(key, id);
      ++ar.crossings;
    }
  // Marker at the middle of every edge not already crossed there, so no arc bounds a digon with its edge.
  for (std::size_t e = 0; e < ar.edge_points.size(); ++e) {
    auto& pts = ar.edge_points[e];
    if (std::none_of(pts.begin(), pts.end(), [&](const auto& x) { return x.first == W / 2; })) {
      pts.emplace_back(W / 2, next++);
      ++ar.markers;
    }
  }
  for (auto& pts : ar.edge_points) std::sort(pts.begin(), pts.end());
  ar.W = W;
  auto place = [&](std::uint32_t sq, const Crossing& x) {
    int t = s.slot(sq, x.edge);
    if (t < 0) throw ValidationError("curve arc leaves its square");
    long long key = x.near == kNone ? W / 2 : x.near == s.cycle[sq][t] ? x.depth : W - x.depth;
    return t * W + key;
  };
  ar.square_chords.resize(s.cycle.size());
  ar.curve_chords.resize(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const std::size_t m = c.crossings.size();
    for (std::size_t k = 0; k < m; ++k) {
      auto sq = c.squares[k];
      long long ka = place(sq, c.crossings[k]), kb = place(sq, c.crossings[(k + 1) % m]);
      Arrangement::Chord ch{sq, ids[i][k], ids[i][(k + 1) % m], on_circle(ka, W), on_circle(kb, W), ka, kb, {}};
      ar.curve_chords[i].push_back(ar.chords.size());
      ar.square_chords[sq].push_back(ar.chords.size());
      ar.chords.push_back(std::move(ch));
    }
  }
  std::vector<std::pair<long long, long long>> ends;
  for (const auto& list : ar.square_chords) {
    ends.clear();
    for (auto ci : list) ends.emplace_back(std::minmax(ar.chords[ci].ka, ar.chords[ci].kb));
    detail::interleaved_pairs(ends, [&](std::size_t x, std::size_t y) {
      auto& c1 = ar.chords[list[x]];
      auto& c2 = ar.chords[list[y]];
      Real dx1 = c1.pb.x - c1.pa.x, dy1 = c1.pb.y - c1.pa.y;
      Real dx2 = c2.pb.x - c2.pa.x, dy2 = c2.pb.y - c2.pa.y;
      Real den = dx1 * dy2 - dy1 * dx2;
      Real ex = c2.pa.x - c1.pa.x, ey = c2.pa.y - c1.pa.y;
      Real t1 = (ex * dy2 - ey * dx2) / den, t2 = (ex * dy1 - ey * dx1) / den;
      if (den == 0 || t1 <= 0 || t1 >= 1 || t2 <= 0 || t2 >= 1)
        throw ValidationError("curve arcs touch in square " + std::to_string(c1.square));
      VertexId id = next++;
      c1.inner.emplace_back(t1, id);
      c2.inner.emplace_back(t2, id);
      ++ar.intersections;
    });
  }
  for (auto& ch : ar.chords) {
    std::sort(ch.inner.begin(), ch.inner.end());
    for (std::size_t k = 1; k < ch.inner.size(); ++k)
      if (ch.inner[k].first - ch.inner[k - 1].first < 1e-12L) throw ValidationError("three curve arcs meet at a point");
  }
  ar.n_vertices = next;
  return ar;
}

// Faces of the arrangement inside one square, as counterclockwise vertex cycles.
std::vector<std::vector<VertexId>> square_faces(const OrientedSurface& s, const Arrangement& ar, std::uint32_t sq) {
  std::vector<VertexId> gid;
  std::vector<Point> pos;
  std::unordered_map<VertexId, int> local;
  auto add = [&](VertexId g, Point p) {
    auto [it, fresh] = local.emplace(g, static_cast<int>(gid.size()));
    if (fresh) {
      gid.push_back(g);
      pos.push_back(p);
    }
    return it->second;
  };
  std::vector<std::vector<int>> nbr;
  auto link = [&](int a, int b) {
    if (nbr.size() < gid.size()) nbr.resize(gid.size());
    nbr[a].push_back(b);
    nbr[b].push_back(a);
  };
  const long long W = ar.W;
  for (int t = 0; t < 4; ++t) {
    auto e = s.sq_edges[sq][t];
    VertexId from = s.cycle[sq][t], to = s.cycle[sq][(t + 1) % 4];
    std::vector<int> chain{add(from, on_circle(t * W, W))};
    const auto& pts = ar.edge_points[e];
    const bool fwd = from == s.edge_ends[e][0];
    for (std::size_t k = 0; k < pts.size(); ++k) {
      auto [key, id] = pts[fwd ? k : pts.size() - 1 - k];
      chain.push_back(add(id, on_circle(t * W + (fwd ? key : W - key), W)));
    }
    chain.push_back(add(to, on_circle((t + 1) * W, W)));
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) link(chain[k], chain[k + 1]);
  }
  for (auto ci : ar.square_chords[sq]) {
    const auto& ch = ar.chords[ci];
    std::vector<int> chain{local.at(ch.a)};
    for (auto [t, id] : ch.inner)
      chain.push_back(add(id, {ch.pa.x + t * (ch.pb.x - ch.pa.x), ch.pa.y + t * (ch.pb.y - ch.pa.y)}));
    chain.push_back(local.at(ch.b));
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) link(chain[k], chain[k + 1]);
  }
  nbr.resize(gid.size());
  const std::size_t n = gid.size();
  std::vector<std::vector<int>> order(n);
  for (std::size_t u = 0; u < n; ++u) {
    auto& nb = nbr[u];
    std::sort(nb.begin(), nb.end(), [&](int a, int b) {
      return std::atan2(pos[a].y - pos[u].y, pos[a].x - pos[u].x) < std::atan2(pos[b].y - pos[u].y, pos[b].x - pos[u].x);
    });
  }
  std::vector<std::vector<char>> used(n);
  for (std::size_t u = 0; u < n; ++u) used[u].assign(nbr[u].size(), 0);
  std::vector<std::vector<VertexId>> faces;
  int outer = 0;
  for (std::size_t u0 = 0; u0 < n; ++u0)
    for (std::size_t j0 = 0; j0 < nbr[u0].size(); ++j0) {
      if (used[u0][j0]) continue;
      std::vector<int> cyc;
      std::size_t u = u0, j = j0;
      do {
        used[u][j] = 1;
        cyc.push_back(static_cast<int>(u));
        if (cyc.size() > 2 * n + 2) throw ValidationError("face walk in square " + std::to_string(sq) + " does not close");
        int v = nbr[u][j];
        const auto& nv = nbr[v];
        std::size_t p = std::find(nv.begin(), nv.end(), static_cast<int>(u)) - nv.begin();
        j = (p + nv.size() - 1) % nv.size();
        u = static_cast<std::size_t>(v);
      } while (!(u == u0 && j == j0));
      Real area = 0;
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        const auto &a = pos[cyc[k]], &b = pos[cyc[(k + 1) % cyc.size()]];
        area += a.x * b.y - a.y * b.x;
      }
      if (area <= 0) {
        ++outer;
        continue;
      }
      std::vector<VertexId> f;
      for (int x : cyc) f.push_back(gid[x]);
      faces.push_back(std::move(f));
    }
  if (outer != 1) throw ValidationError("arrangement in square " + std::to_string(sq) + " is not connected");
  return faces;
}

}  // namespace

std::vector<StepCensus> refine_census(const CubeComplex& q, const CurveBasis& b) {
  auto s = orient_surface(q);
  auto ar = arrange(s, b.curves);
  const auto f = q.fvector();
  const std::size_t v1 = f[0] + ar.crossings + ar.intersections + ar.markers;
  const std::size_t e1 = f[1] + 2 * ar.crossings + 2 * ar.intersections + ar.markers;
  const long long chi = f.euler();
  const std::size_t f1 = static_cast<std::size_t>(chi - static_cast<long long>(v1) + static_cast<long long>(e1));
  std::vector<StepCensus> out;
  out.push_back({"input", f});
  out.push_back({"arrangement", FVector{{v1, e1, f1}}});
  out.push_back({"edge_split", FVector{{v1 + e1, 2 * e1, f1}}});
  out.push_back({"polygon_centers", FVector{{v1 + e1 + f1, 4 * e1, 2 * e1}}});
  out.push_back({"inset", FVector{{v1 + e1 + f1 + 8 * e1, 4 * e1 + 16 * e1, 10 * e1}}});
  return out;
}

Refinement refine_with_basis(const CubeComplex& q, const CurveBasis& b) {
  auto cb = crossing_bound(b.curves);
  if (cb.max > 2) throw PreconditionError("curve " + std::to_string(cb.curve) + " crosses edge " +
                                          std::to_string(cb.edge) + " " + std::to_string(cb.max) + " times");
  auto s = orient_surface(q);
  auto ar = arrange(s, b.curves);
  VertexId next = static_cast<VertexId>(ar.n_vertices);
  std::unordered_map<std::uint64_t, VertexId> mid;
  auto midpoint = [&](VertexId a, VertexId c) {
    auto [it, fresh] = mid.emplace(pair_key(a, c), next);
    if (fresh) ++next;
    return it->second;
  };
  Refinement r;
  r.census = refine_census(q, b);
  std::vector<std::vector<VertexId>> cells;
  std::size_t n_faces = 0;
  for (std::uint32_t sq = 0; sq < s.cycle.size(); ++sq)
    for (const auto& f : square_faces(s, ar, sq)) {
      ++n_faces;
      const VertexId c = next++;
      const std::size_t m = f.size();
      for (std::size_t i = 0; i < m; ++i) {
        VertexId prev = midpoint(f[(i + m - 1) % m], f[i]), after = midpoint(f[i], f[(i + 1) % m]);
        cells.push_back(quad(c, prev, f[i], after));
      }
    }
  if (n_faces != r.census[1].f.f.at(2)) throw ValidationError("arrangement face count disagrees with the census");
  r.complex = split_all_squares5(build_complex(2, next, cells));
  for (std::size_t e = 0; e < s.edge_ends.size(); ++e) {
    std::vector<VertexId> pts{s.edge_ends[e][0]};
    for (auto [key, id] : ar.edge_points[e]) pts.push_back(id);
    pts.push_back(s.edge_ends[e][1]);
    std::vector<VertexId> chain;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      chain.push_back(pts[k]);
      chain.push_back(midpoint(pts[k], pts[k + 1]));
    }
    chain.push_back(pts.back());
    r.edge_chains.push_back(std::move(chain));
  }
  for (const auto& chords : ar.curve_chords) {
    std::vector<VertexId> path;
    for (auto ci : chords) {
      const auto& ch = ar.chords[ci];
      std::vector<VertexId> pts{ch.a};
      for (auto [t, id] : ch.inner) pts.push_back(id);
      pts.push_back(ch.b);
      for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        path.push_back(pts[k]);
        path.push_back(midpoint(pts[k], pts[k + 1]));
      }
    }
    r.basis.curves.push_back(std::move(path));
  }
  return r;
}

namespace {

std::vector<std::vector<std::uint32_t>> squares_at(const CubeComplex& c) {
  std::vector<std::vector<std::uint32_t>> star(c.n_vertices());
  for (std::uint32_t q = 0; q < c.count(2); ++q)
    for (auto v : c.cell(2, q)) star[v].push_back(q);
  return star;
}

RegularNeighborhoodCert certify(const CubeComplex& c, const std::vector<std::vector<std::uint32_t>>& star,
                                const std::vector<VertexId>& p, std::size_t index) {
  RegularNeighborhoodCert cert;
  cert.curve = index;
  const std::size_t L = p.size();
  auto fail = [&](std::optional<std::uint32_t> q, std::string why) {
    cert.offending_square = q;
    cert.reason = std::move(why);
    return cert;
  };
  if (L < 3) return fail(std::nullopt, "curve has fewer than three vertices");
  struct SideSquare {
    std::uint32_t q;
    VertexId x, y;  // x next to p_t, y next to p_{t+1}
  };
  std::vector<std::array<SideSquare, 2>> side(L);
  for (std::size_t t = 0; t < L; ++t) {
    VertexId a = p[t], b = p[(t + 1) % L];
    std::vector<SideSquare> found;
    for (auto q : star[a]) {
      auto k = c.cell(2, q);
      std::size_t pa = std::find(k.begin(), k.end(), a) - k.begin();
      std::size_t pb = std::find(k.begin(), k.end(), b) - k.begin();
      if (pb == k.size() || std::popcount(pa ^ pb) != 1) continue;
      std::size_t other = 3 ^ (pa ^ pb);
      found.push_back({q, k[pa ^ other], k[pb ^ other]});
    }
    if (found.size() != 2)
      return fail(found.empty() ? std::nullopt : std::optional(found.back().q),
                  "edge " + std::to_string(t) + " of the curve lies in " + std::to_string(found.size()) + " squares");
    side[t] = {found[0], found[1]};
    if (t > 0) {
      if (side[t][0].x != side[t - 1][0].y) std::swap(side[t][0], side[t][1]);
      if (side[t][0].x != side[t - 1][0].y || side[t][1].x != side[t - 1][1].y)
        return fail(side[t][0].q, "strip breaks at curve vertex " + std::to_string(t));
    }
  }
  if (side[L - 1][0].y != side[0][0].x || side[L - 1][1].y != side[0][1].x)
    return fail(side[0][0].q, "strip does not close into an annulus");
  std::vector<VertexId> verts(p);
  for (const auto& sd : side) {
    verts.push_back(sd[0].x);
    verts.push_back(sd[1].x);
    cert.squares.push_back(sd[0].q);
    cert.squares.push_back(sd[1].q);
  }
  auto sorted = verts;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return fail(std::nullopt, "strip vertices are not distinct");
  auto strip = cert.squares;
  std::sort(strip.begin(), strip.end());
  if (std::adjacent_find(strip.begin(), strip.end()) != strip.end()) return fail(std::nullopt, "strip squares repeat");
  for (auto v : p)
    for (auto q : star[v])
      if (!std::binary_search(strip.begin(), strip.end(), q))
        return fail(q, "square meets the curve outside its strip");
  cert.ok = true;
  return cert;
}

std::uint64_t directed(VertexId a, VertexId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

}  // namespace

RegularNeighborhoodCert neighborhood_certificate(const CubeComplex& c, const std::vector<VertexId>& curve,
                                                 std::size_t index) {
  return certify(c, squares_at(c), curve, index);
}

Regularized regularize_neighborhoods(const Refinement& r) {
  const auto& curves = r.basis.curves;
  if (curves.size() % 2) throw PreconditionError("basis must hold alpha/beta pairs");
  auto o = orient_surface(r.complex);
  std::vector<std::pair<std::size_t, std::size_t>> where(r.complex.n_vertices(), {kNone, 0});
  std::vector<std::uint32_t> cut_edges;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& p = curves[i];
    for (std::size_t t = 0; t < p.size(); ++t) {
      auto e = o.edge_between(p[t], p[(t + 1) % p.size()]);
      if (e == kNone) throw PreconditionError("curve " + std::to_string(i) + " is not an edge path");
      cut_edges.push_back(e);
    }
  }
  // Each pair is rotated to start at its crossing.
  std::vector<std::vector<VertexId>> rot(curves.size());
  std::vector<VertexId> crossing(curves.size() / 2);
  for (std::size_t i = 0; i < curves.size(); i += 2) {
    std::vector<VertexId> a(curves[i]), b(curves[i + 1]), common;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    if (common.size() != 1) throw PreconditionError("pair " + std::to_string(i / 2) + " does not meet in one vertex");
    crossing[i / 2] = common[0];
    for (std::size_t j : {i, i + 1}) {
      rot[j] = curves[j];
      std::rotate(rot[j].begin(), std::find(rot[j].begin(), rot[j].end(), common[0]), rot[j].end());
      for (std::size_t t = 0; t < rot[j].size(); ++t) {
        if (where[rot[j][t]].first != kNone && t != 0) throw PreconditionError("basis curves overlap");
        where[rot[j][t]] = {j, t};
      }
    }
  }
  auto cut = cut_along_edges(r.complex, cut_edges);
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, int>> side_of;
  for (std::uint32_t q = 0; q < cut.cycles.size(); ++q)
    for (int t = 0; t < 4; ++t) {
      VertexId a = cut.cycles[q][t], b = cut.cycles[q][(t + 1) % 4];
      if (where[a].first != kNone || where[b].first != kNone) side_of[directed(a, b)] = {q, t};
    }
  // Copy of the endpoint `at` of edge a->b on the side `left` of that edge.
  auto copy = [&](VertexId a, VertexId b, bool left, VertexId at) {
    auto it = left ? side_of.find(directed(a, b)) : side_of.find(directed(b, a));
    if (it == side_of.end()) throw ValidationError("curve edge has no square on one side");
    auto [q, t] = it->second;
    const auto& oc = cut.cycles[q];
    return cut.new_cycles[q][oc[t] == at ? t : (t + 1) % 4];
  };
  VertexId next = static_cast<VertexId>(cut.complex.n_vertices());
  std::vector<std::vector<VertexId>> cells;
  for (const auto& nc : cut.new_cycles) cells.push_back(quad_of(nc));
  const std::size_t before = cells.size();
  Regularized out;
  std::vector<std::vector<VertexId>> left(curves.size()), right(curves.size()), mids(curves.size());
  for (std::size_t j = 0; j < curves.size(); ++j) {
    const auto& p = rot[j];
    const std::size_t L = p.size();
    left[j].resize(L + 1);
    right[j].resize(L + 1);
    for (std::size_t t = 0; t < L; ++t) {
      VertexId a = p[t], b = p[(t + 1) % L];
      left[j][t] = copy(a, b, true, a);
      right[j][t] = copy(a, b, false, a);
      if (t > 0 && (left[j][t] != copy(p[t - 1], a, true, a) || right[j][t] != copy(p[t - 1], a, false, a)))
        throw ValidationError("curve " + std::to_string(j) + " is not two-sided at vertex " + std::to_string(t));
    }
    left[j][L] = copy(p[L - 1], p[0], true, p[0]);
    right[j][L] = copy(p[L - 1], p[0], false, p[0]);
    for (std::size_t t = 0; t <= L; ++t) mids[j].push_back(next++);
    for (std::size_t t = 0; t < L; ++t) {
      cells.push_back(quad(left[j][t], left[j][t + 1], mids[j][t + 1], mids[j][t]));
      cells.push_back(quad(mids[j][t], mids[j][t + 1], right[j][t + 1], right[j][t]));
    }
  }
  for (std::size_t i = 0; i < curves.size(); i += 2) {
    const VertexId center = next++;
    auto corners = [&](std::size_t j) {
      const std::size_t L = rot[j].size();
      return std::array<std::pair<VertexId, VertexId>, 4>{
          {{left[j][0], mids[j][0]}, {right[j][0], mids[j][0]}, {left[j][L], mids[j][L]}, {right[j][L], mids[j][L]}}};
    };
    auto ca = corners(i), cb = corners(i + 1);
    for (auto [corner, ma] : ca) {
      auto it = std::find_if(cb.begin(), cb.end(), [&](const auto& x) { return x.first == corner; });
      if (it == cb.end()) throw ValidationError("pair " + std::to_string(i / 2) + " does not cross transversally");
      cells.push_back(quad(corner, ma, center, it->second));
    }
    for (std::size_t j : {i, i + 1}) {
      std::vector<VertexId> path{center};
      path.insert(path.end(), mids[j].begin(), mids[j].end());
      out.basis.curves.push_back(std::move(path));
    }
  }
  out.added_squares = cells.size() - before;
  out.complex = build_complex(2, next, cells);
  // Edge chains pass through the cut at curve vertices; the ribbon adds a rung of two edges there.
  for (const auto& chain : r.edge_chains) {
    std::vector<VertexId> nc{chain.front()};
    for (std::size_t k = 1; k + 1 < chain.size(); ++k) {
      VertexId v = chain[k];
      auto [j, t] = where[v];
      if (j == kNone) {
        nc.push_back(v);
        continue;
      }
      if (t == 0) throw ValidationError("an edge chain runs through a curve crossing");
      auto toward = [&](VertexId a) {
        auto it = side_of.find(directed(v, a));
        if (it == side_of.end()) it = side_of.find(directed(a, v));
        auto [q, s] = it->second;
        const auto& oc = cut.cycles[q];
        return cut.new_cycles[q][oc[s] == v ? s : (s + 1) % 4];
      };
      nc.push_back(toward(chain[k - 1]));
      nc.push_back(mids[j][t]);
      nc.push_back(toward(chain[k + 1]));
    }
    nc.push_back(chain.back());
    out.edge_chains.push_back(std::move(nc));
  }
  auto star = squares_at(out.complex);
  for (std::size_t j = 0; j < out.basis.curves.size(); ++j)
    out.certs.push_back(certify(out.complex, star, out.basis.curves[j], j));
  return out;
}

}  // namespace cubesphere
