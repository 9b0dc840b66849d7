#include "cubesphere/sphere_builder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "cubesphere/basis.hpp"
#include "cubesphere/error.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/surface.hpp"
#include "cubesphere/surface_gen.hpp"
#include "cubesphere/transforms.hpp"

namespace cubesphere {

namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::array<VertexId, 4> cycle_of(std::span<const VertexId> sq) { return {sq[0], sq[1], sq[3], sq[2]}; }

std::vector<VertexId> mapped(std::span<const VertexId> cell, const std::vector<VertexId>& g) {
  std::vector<VertexId> out(cell.size());
  for (std::size_t i = 0; i < cell.size(); ++i) out[i] = g[cell[i]];
  return out;
}

// For every Q square, the Q′ squares lying over it.
std::vector<std::vector<std::uint32_t>> regions(const SurfaceRefinement& r) {
  const auto& q = r.q;
  const auto& qp = r.qprime;
  std::unordered_map<std::uint64_t, char> chain_edge;
  for (const auto& ch : r.edge_chains)
    for (std::size_t i = 0; i + 1 < ch.size(); ++i) chain_edge[pair_key(ch[i], ch[i + 1])] = 1;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_edge;
  for (std::uint32_t s = 0; s < qp.count(2); ++s) {
    auto c = cycle_of(qp.cell(2, s));
    for (int t = 0; t < 4; ++t) by_edge[pair_key(c[t], c[(t + 1) % 4])].push_back(s);
  }
  std::map<std::vector<VertexId>, std::uint32_t> q_square;
  for (std::uint32_t f = 0; f < q.count(2); ++f) {
    auto c = q.cell(2, f);
    std::vector<VertexId> key(c.begin(), c.end());
    std::sort(key.begin(), key.end());
    q_square[key] = f;
  }
  std::vector<std::vector<std::uint32_t>> out(q.count(2));
  std::vector<char> seen(qp.count(2), 0);
  std::vector<char> filled(q.count(2), 0);
  for (std::uint32_t s0 = 0; s0 < qp.count(2); ++s0) {
    if (seen[s0]) continue;
    std::vector<std::uint32_t> region{s0}, stack{s0};
    seen[s0] = 1;
    while (!stack.empty()) {
      auto s = stack.back();
      stack.pop_back();
      auto c = cycle_of(qp.cell(2, s));
      for (int t = 0; t < 4; ++t) {
        auto key = pair_key(c[t], c[(t + 1) % 4]);
        if (chain_edge.count(key)) continue;
        for (auto o : by_edge[key])
          if (!seen[o]) {
            seen[o] = 1;
            region.push_back(o);
            stack.push_back(o);
          }
      }
    }
    std::vector<VertexId> corners;
    for (auto s : region)
      for (auto v : qp.cell(2, s))
        if (v < q.n_vertices()) corners.push_back(v);
    std::sort(corners.begin(), corners.end());
    corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
    auto it = q_square.find(corners);
    if (it == q_square.end() || filled[it->second])
      throw ValidationError("Q′ region of square " + std::to_string(s0) + " does not sit over one Q square");
    filled[it->second] = 1;
    std::sort(region.begin(), region.end());
    out[it->second] = std::move(region);
  }
  for (std::size_t f = 0; f < filled.size(); ++f)
    if (!filled[f]) throw ValidationError("Q square " + std::to_string(f) + " has no Q′ region");
  return out;
}

// Renumbers global squares into a local sphere.
FillRequest make_request(const std::vector<std::vector<VertexId>>& squares, std::string origin, std::size_t index) {
  FillRequest r;
  r.origin = std::move(origin);
  r.index = index;
  std::unordered_map<VertexId, VertexId> local;
  std::vector<std::vector<VertexId>> cells;
  cells.reserve(squares.size());
  for (const auto& sq : squares) {
    std::vector<VertexId> c(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
      auto [it, fresh] = local.emplace(sq[i], static_cast<VertexId>(r.to_global.size()));
      if (fresh) r.to_global.push_back(sq[i]);
      c[i] = it->second;
    }
    cells.push_back(std::move(c));
  }
  r.sphere = build_complex(2, r.to_global.size(), cells);
  if (r.sphere.count(2) != squares.size()) {
    r.detail = "repeated squares";
    return r;
  }
  check_fill_hypotheses(r);
  return r;
}

}  // namespace

SurfaceRefinement refine_surface(const CubeComplex& q) {
  auto b = canonical_basis(q);
  auto ref = refine_with_basis(q, b);
  SurfaceRefinement r;
  r.q = q;
  if (b.curves.empty()) {
    r.qprime = std::move(ref.complex);
    r.edge_chains = std::move(ref.edge_chains);
    return r;
  }
  auto reg = regularize_neighborhoods(ref);
  for (const auto& c : reg.certs)
    if (!c.ok) throw ValidationError("curve " + std::to_string(c.curve) + " has no regular neighborhood: " + c.reason);
  r.qprime = std::move(reg.complex);
  r.edge_chains = std::move(reg.edge_chains);
  for (std::size_t i = 0; i < reg.basis.curves.size(); ++i)
    (i % 2 ? r.beta : r.alpha).push_back(std::move(reg.basis.curves[i]));
  return r;
}

SurfaceRefinement refine_surface_without_basis(const CubeComplex& q) {
  auto ref = refine_with_basis(q, CurveBasis{});
  SurfaceRefinement r;
  r.q = q;
  r.qprime = std::move(ref.complex);
  r.edge_chains = std::move(ref.edge_chains);
  return r;
}

bool check_fill_hypotheses(FillRequest& r) {
  r.hypotheses_ok = false;
  if (r.sphere.top_dim() != 2 || !validate(r.sphere).is_complex) {
    r.detail = "not a valid square complex";
    return false;
  }
  try {
    auto inv = surface_invariants(r.sphere);
    if (!inv.closed || !inv.orientable || inv.components != 1 || inv.genus != 0) {
      r.detail = "not a 2-sphere (genus " + std::to_string(inv.genus) + ")";
      return false;
    }
  } catch (const PreconditionError& e) {
    r.detail = e.what();
    return false;
  }
  if (r.sphere.count(2) % 2) {
    r.detail = "odd number of squares";
    return false;
  }
  r.hypotheses_ok = true;
  r.detail.clear();
  return true;
}

FillOutcome fill_requests(const std::vector<FillRequest>& requests, VertexId& next, const FillOptions& opt,
                          bool inset) {
  FillOutcome out;
  const VertexId start = next;
  for (const auto& req : requests) {
    if (!req.hypotheses_ok) {
      out.failure = req.origin + " " + std::to_string(req.index) + ": " + req.detail;
      return out;
    }
    FillCertificate cert;
    try {
      cert = fill_ball(req.sphere, opt);
    } catch (const FillFailed& e) {
      out.failure = req.origin + " " + std::to_string(req.index) + ": " + e.what();
      return out;
    }
    std::vector<VertexId> g(cert.ball.n_vertices());
    for (std::size_t v = 0; v < g.size(); ++v) g[v] = v < req.to_global.size() ? req.to_global[v] : next++;
    for (const auto& cube : cert.ball.top_cells()) {
      auto c = mapped(cube, g);
      if (inset) inset_cube7(c, next, out.cubes);
      else out.cubes.push_back(std::move(c));
    }
  }
  out.vertices = next - start;
  out.ok = true;
  return out;
}

RefiningCylinder refining_cylinder_skeleton(const SurfaceRefinement& r, const std::vector<VertexId>& q_global,
                                            VertexId& next) {
  const auto& q = r.q;
  const auto& qp = r.qprime;
  if (q_global.size() != q.n_vertices()) throw PreconditionError("Q vertex map has the wrong size");
  if (r.edge_chains.size() != q.count(1)) throw PreconditionError("one edge chain per Q edge is required");
  RefiningCylinder out;
  out.census.stage = "refining";
  const VertexId start = next;
  auto cls = bipartite_classes(q);

  std::vector<VertexId> top(qp.n_vertices());
  for (auto& v : top) v = next++;
  // Vertical edges at the smaller class are split.
  std::vector<VertexId> mid(q.n_vertices(), kNone);
  for (VertexId v = 0; v < q.n_vertices(); ++v)
    if (cls[v] == 0) mid[v] = next++;

  std::vector<std::vector<std::vector<VertexId>>> side(q.count(1));
  for (std::size_t e = 0; e < q.count(1); ++e) {
    const auto& ch = r.edge_chains[e];
    if (ch.size() % 2 == 0) throw PreconditionError("Q edge " + std::to_string(e) + " is not evenly subdivided");
    VertexId a = ch.front(), b = ch.back();
    std::vector<VertexId> poly{q_global[a], q_global[b]};
    if (mid[b] != kNone) poly.push_back(mid[b]);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) poly.push_back(top[*it]);
    if (mid[a] != kNone) poly.push_back(mid[a]);
    if (poly.size() % 2) throw ValidationError("side face of edge " + std::to_string(e) + " is odd");
    const VertexId center = next++;
    for (std::size_t j = 0; j < poly.size(); j += 2)
      split_square5({center, poly[j], poly[j + 1], poly[(j + 2) % poly.size()]}, next, side[e]);
  }

  auto reg = regions(r);
  std::vector<std::vector<std::uint32_t>> q_edges(q.count(2));
  std::vector<char> ten(qp.count(2), 0);
  for (std::size_t f = 0; f < q.count(2); ++f) {
    auto c = q.cell(2, f);
    std::size_t count = 1 + reg[f].size();
    for (int axis = 0; axis < 2; ++axis)
      for (int s = 0; s < 2; ++s) {
        auto e = *q.find(cube_facet(c, axis, s));
        q_edges[f].push_back(static_cast<std::uint32_t>(e));
        count += side[e].size();
      }
    if (count % 2) {
      ten[reg[f].front()] = 1;
      ++out.ten_applied;
    }
  }

  // Q″ in Q′ ids extended by the 10-split vertices.
  VertexId local = static_cast<VertexId>(qp.n_vertices());
  std::vector<std::vector<VertexId>> q2cells;
  std::vector<std::pair<std::size_t, std::size_t>> piece(qp.count(2));  // Q′ square -> range in q2cells
  for (std::size_t s = 0; s < qp.count(2); ++s) {
    std::size_t from = q2cells.size();
    auto c = qp.cell(2, s);
    if (ten[s]) split_square10(cycle_of(c), local, q2cells);
    else q2cells.emplace_back(c.begin(), c.end());
    piece[s] = {from, q2cells.size()};
  }
  out.q2 = build_complex(2, local, q2cells);
  out.q2_global = top;
  for (VertexId v = static_cast<VertexId>(qp.n_vertices()); v < local; ++v) out.q2_global.push_back(next++);

  for (std::size_t f = 0; f < q.count(2); ++f) {
    std::vector<std::vector<VertexId>> sq{mapped(q.cell(2, f), q_global)};
    for (auto e : q_edges[f]) sq.insert(sq.end(), side[e].begin(), side[e].end());
    for (auto s : reg[f])
      for (std::size_t i = piece[s].first; i < piece[s].second; ++i) sq.push_back(mapped(q2cells[i], out.q2_global));
    out.census.request_squares += sq.size();
    out.requests.push_back(make_request(sq, "pillow", f));
  }
  out.census.requests = out.requests.size();
  for (const auto& s : side) {
    out.census.squares += s.size();
    out.cells.insert(out.cells.end(), s.begin(), s.end());
  }
  for (const auto& c : q2cells) out.cells.push_back(mapped(c, out.q2_global));
  out.census.squares += q2cells.size();
  out.census.vertices = next - start;
  return out;
}

RefiningCylinder refining_cylinder(const SurfaceRefinement& r, const BuildOptions& opt) {
  std::vector<VertexId> ids(r.q.n_vertices());
  std::iota(ids.begin(), ids.end(), 0u);
  VertexId next = static_cast<VertexId>(ids.size());
  auto out = refining_cylinder_skeleton(r, ids, next);
  std::vector<std::vector<VertexId>> cells = out.cells;
  for (std::size_t f = 0; f < r.q.count(2); ++f) {
    auto c = r.q.cell(2, f);
    cells.emplace_back(c.begin(), c.end());
  }
  if (!opt.structural) {
    auto fill = fill_requests(out.requests, next, opt.fill, true);
    if (fill.ok) {
      out.filled = true;
      out.census.fill_cubes = fill.cubes.size();
      out.census.fill_vertices = fill.vertices;
      cells = std::move(fill.cubes);
    }
  }
  out.complex = build_complex(out.filled ? 3 : 2, next, cells);
  return out;
}

Handlebody handlebody_skeleton(const CubeComplex& q2, const std::vector<VertexId>& g,
                               const std::vector<std::vector<VertexId>>& curves, VertexId& next) {
  if (g.size() != q2.n_vertices()) throw PreconditionError("Q″ vertex map has the wrong size");
  Handlebody out;
  out.census.stage = "handlebody";
  const VertexId start = next;
  OrientedSurface o = orient_surface(q2);
  if (!o.closed || !o.orientable) throw PreconditionError("handlebody boundary is not a closed orientable surface");
  std::vector<std::pair<std::size_t, std::size_t>> where(q2.n_vertices(), {kNone, 0});
  std::vector<std::uint32_t> edges;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    if (c.size() < 4 || c.size() % 2) throw PreconditionError("curve " + std::to_string(i) + " has odd length");
    for (std::size_t t = 0; t < c.size(); ++t) {
      if (c[t] >= q2.n_vertices()) throw PreconditionError("curve vertex out of range");
      if (where[c[t]].first != kNone)
        throw PreconditionError("curves " + std::to_string(where[c[t]].first) + " and " + std::to_string(i) + " meet");
      where[c[t]] = {i, t};
      auto e = o.edge_between(c[t], c[(t + 1) % c.size()]);
      if (e == kNone) throw PreconditionError("curve " + std::to_string(i) + " leaves the 1-skeleton");
      edges.push_back(e);
    }
  }
  auto cut = cut_along_edges(q2, edges);

  // Boundary cycles of the cut surface, each aligned with its curve.
  std::unordered_map<std::uint64_t, char> directed;
  for (const auto& c : cut.new_cycles)
    for (int t = 0; t < 4; ++t) directed[(std::uint64_t{c[t]} << 32) | c[(t + 1) % 4]] = 1;
  std::unordered_map<VertexId, VertexId> succ;
  for (const auto& c : cut.new_cycles)
    for (int t = 0; t < 4; ++t) {
      VertexId a = c[t], b = c[(t + 1) % 4];
      if (!directed.count((std::uint64_t{b} << 32) | a)) {
        if (!succ.emplace(a, b).second) throw ValidationError("cut boundary branches at vertex " + std::to_string(a));
      }
    }
  std::vector<std::vector<std::vector<VertexId>>> copies(curves.size());
  std::vector<char> visited(cut.complex.n_vertices(), 0);
  std::vector<VertexId> starts;
  for (const auto& [a, b] : succ) starts.push_back(a);
  std::sort(starts.begin(), starts.end());
  for (auto s : starts) {
    if (visited[s]) continue;
    std::size_t i = where[cut.parent[s]].first;
    const std::size_t L = curves[i].size();
    std::vector<VertexId> aligned(L, kNone);
    VertexId x = s;
    std::size_t steps = 0;
    do {
      visited[x] = 1;
      auto [j, t] = where[cut.parent[x]];
      if (j != i || aligned[t] != kNone) throw ValidationError("cut boundary does not follow curve " + std::to_string(i));
      aligned[t] = x;
      x = succ.at(x);
      if (++steps > L) throw ValidationError("cut boundary of curve " + std::to_string(i) + " is too long");
    } while (x != s);
    if (steps != L) throw ValidationError("cut boundary of curve " + std::to_string(i) + " is too short");
    copies[i].push_back(std::move(aligned));
  }

  // Disk template: boundary 0..L-1, center L, inset vertices after.
  VertexId local = static_cast<VertexId>(cut.complex.n_vertices());
  std::vector<VertexId> cmap(cut.complex.n_vertices());
  for (VertexId x = 0; x < cmap.size(); ++x) cmap[x] = g[cut.parent[x]];
  std::vector<std::vector<VertexId>> squares;
  for (std::size_t x = 0; x < cut.complex.count(2); ++x) {
    auto c = cut.complex.cell(2, x);
    squares.emplace_back(c.begin(), c.end());
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (copies[i].size() != 2) throw ValidationError("curve " + std::to_string(i) + " is not two-sided");
    const auto L = static_cast<VertexId>(curves[i].size());
    VertexId tnext = L + 1;
    std::vector<std::vector<VertexId>> disk;
    for (VertexId j = 0; j < L; j += 2) split_square5({L, j, j + 1, (j + 2) % L}, tnext, disk);
    std::vector<VertexId> a_global(tnext);
    for (VertexId p = 0; p < L; ++p) a_global[p] = g[curves[i][p]];
    for (VertexId p = L; p < tnext; ++p) a_global[p] = next++;
    out.census.squares += disk.size();
    for (const auto& copy : copies[i]) {
      std::vector<VertexId> ids(tnext);
      for (VertexId p = 0; p < L; ++p) ids[p] = copy[p];
      for (VertexId p = L; p < tnext; ++p) {
        ids[p] = local++;
        cmap.push_back(a_global[p]);
      }
      for (const auto& sq : disk) squares.push_back(mapped(sq, ids));
    }
  }
  out.sphere = build_complex(2, local, squares);
  std::vector<VertexId> dmap(local);
  for (auto& v : dmap) v = next++;
  for (std::size_t x = 0; x < out.sphere.count(2); ++x) {
    auto sq = out.sphere.cell(2, x);
    std::vector<VertexId> cube(8);
    for (int ca = 0; ca < 4; ++ca) {
      cube[ca] = cmap[sq[ca]];
      cube[4 + ca] = dmap[sq[ca]];
    }
    out.cells.push_back(std::move(cube));
  }
  std::vector<std::vector<VertexId>> end;
  for (std::size_t x = 0; x < out.sphere.count(2); ++x) end.push_back(mapped(out.sphere.cell(2, x), dmap));
  out.requests.push_back(make_request(end, "handlebody_end", 0));
  out.census.cubes = out.cells.size();
  out.census.requests = 1;
  out.census.request_squares = end.size();
  out.census.vertices = next - start;
  return out;
}

Handlebody handlebody(const CubeComplex& q2, const std::vector<std::vector<VertexId>>& curves,
                      const BuildOptions& opt) {
  std::vector<VertexId> ids(q2.n_vertices());
  std::iota(ids.begin(), ids.end(), 0u);
  VertexId next = static_cast<VertexId>(ids.size());
  auto out = handlebody_skeleton(q2, ids, curves, next);
  if (!opt.structural) {
    auto fill = fill_requests(out.requests, next, opt.fill, false);
    if (fill.ok) {
      out.filled = true;
      out.census.fill_cubes = fill.cubes.size();
      out.census.fill_vertices = fill.vertices;
      out.cells.insert(out.cells.end(), fill.cubes.begin(), fill.cubes.end());
    }
  }
  out.complex = build_complex(3, next, out.cells);
  return out;
}

namespace {

std::size_t predicted_skeleton_vertices(const SurfaceRefinement& r, long long k,
                                        const std::vector<std::size_t>& tens) {
  const auto& q = r.q;
  auto cls = bipartite_classes(q);
  std::size_t small = std::count(cls.begin(), cls.end(), 0);
  std::size_t side = q.count(1);
  for (const auto& ch : r.edge_chains) side += 2 * (ch.size() + 3);
  std::size_t total = static_cast<std::size_t>(k + 1) * q.n_vertices();
  for (int s = 0; s < 2; ++s) {
    const auto& curves = s == 0 ? r.beta : r.alpha;
    std::size_t q2 = r.qprime.n_vertices() + 9 * tens[s];
    total += q2 + small + side;
    std::size_t sphere = q2;
    for (const auto& c : curves) {
      total += 1 + 2 * c.size();
      sphere += c.size() + 2 * (1 + 2 * c.size());
    }
    total += sphere;
  }
  return total;
}

}  // namespace

SphereResult sphere3_from(const SurfaceRefinement& r, int n, long long k, const BuildOptions& opt) {
  if (k < 1) throw PreconditionError("k must be at least 1");
  const auto& q = r.q;
  const std::size_t f0 = q.n_vertices();
  if (static_cast<double>(k + 1) * static_cast<double>(f0) > 2e9)
    throw PreconditionError("k = " + std::to_string(k) + " exceeds the vertex id range");
  SphereResult out;
  auto& cen = out.census;
  cen.n = n;
  cen.k = k;
  cen.q = q.fvector();

  std::vector<std::vector<VertexId>> cylinder;
  cylinder.reserve(static_cast<std::size_t>(k) * q.count(2));
  for (long long t = 0; t < k; ++t)
    for (std::size_t s = 0; s < q.count(2); ++s) {
      auto sq = q.cell(2, s);
      std::vector<VertexId> cube(8);
      for (int ca = 0; ca < 4; ++ca) {
        cube[ca] = static_cast<VertexId>(t * f0 + sq[ca]);
        cube[4 + ca] = static_cast<VertexId>((t + 1) * f0 + sq[ca]);
      }
      cylinder.push_back(std::move(cube));
    }
  cen.cylinder_vertices = static_cast<std::size_t>(k + 1) * f0;
  cen.cylinder_cubes = cylinder.size();

  std::vector<VertexId> level_a(f0), level_b(f0);
  for (VertexId v = 0; v < f0; ++v) {
    level_a[v] = v;
    level_b[v] = static_cast<VertexId>(k * f0 + v);
  }
  VertexId next = static_cast<VertexId>(cen.cylinder_vertices);
  auto rc_a = refining_cylinder_skeleton(r, level_a, next);
  auto rc_b = refining_cylinder_skeleton(r, level_b, next);
  auto hb_a = handlebody_skeleton(rc_a.q2, rc_a.q2_global, r.beta, next);
  auto hb_b = handlebody_skeleton(rc_b.q2, rc_b.q2_global, r.alpha, next);
  rc_a.census.stage = "refining_a";
  rc_b.census.stage = "refining_b";
  hb_a.census.stage = "handlebody_a";
  hb_b.census.stage = "handlebody_b";
  cen.ten_applied = rc_a.ten_applied + rc_b.ten_applied;
  cen.measured_vertices = next;
  cen.predicted_vertices = predicted_skeleton_vertices(r, k, {rc_a.ten_applied, rc_b.ten_applied});

  // Parity chain.
  if (q.count(2) % 2 == 0)
    for (const auto* rc : {&rc_a, &rc_b})
      if (rc->q2.count(2) % 2) throw ValidationError("Q is even but Q″ is odd");
  for (const auto* part : {&rc_a.requests, &rc_b.requests, &hb_a.requests, &hb_b.requests})
    for (const auto& req : *part) {
      if (!req.hypotheses_ok)
        throw ValidationError(req.origin + " " + std::to_string(req.index) + " violates the filling hypotheses: " +
                              req.detail);
      out.requests.push_back(req);
    }

  std::vector<std::vector<VertexId>> skeleton = cylinder;
  for (const auto* c : {&rc_a.cells, &rc_b.cells, &hb_a.cells, &hb_b.cells})
    skeleton.insert(skeleton.end(), c->begin(), c->end());
  out.skeleton = build_complex(3, next, skeleton);
  cen.facets = cylinder.size() + hb_a.cells.size() + hb_b.cells.size();
  cen.total_vertices = next;

  if (!opt.structural) {
    std::vector<std::vector<VertexId>> cells = cylinder;
    bool ok = true;
    auto run = [&](const std::vector<FillRequest>& reqs, bool inset, StageCensus& sc) {
      if (!ok) return;
      auto f = fill_requests(reqs, next, opt.fill, inset);
      if (!f.ok) {
        ok = false;
        out.failure = f.failure;
        return;
      }
      sc.fill_cubes = f.cubes.size();
      sc.fill_vertices = f.vertices;
      cells.insert(cells.end(), f.cubes.begin(), f.cubes.end());
    };
    run(rc_a.requests, true, rc_a.census);
    run(rc_b.requests, true, rc_b.census);
    run(hb_a.requests, false, hb_a.census);
    run(hb_b.requests, false, hb_b.census);
    if (ok) {
      cells.insert(cells.end(), hb_a.cells.begin(), hb_a.cells.end());
      cells.insert(cells.end(), hb_b.cells.begin(), hb_b.cells.end());
      auto c = build_complex(3, next, cells);
      auto v = validate(c, 4);
      if (!v.is_complex)
        throw ValidationError("assembled sphere is not a cube complex: " + v.violations.front().reason);
      cen.full = true;
      cen.total_vertices = c.n_vertices();
      cen.facets = c.count(3);
      out.complex = std::move(c);
    }
  }
  cen.stages = {rc_a.census, rc_b.census, hb_a.census, hb_b.census};
  const double n4 = std::pow(static_cast<double>(n), 4);
  cen.vertex_constant = (static_cast<double>(cen.total_vertices) - static_cast<double>(cen.cylinder_vertices)) / n4;
  return out;
}

SphereResult sphere3(int n, long long k, const BuildOptions& opt) {
  if (!is_odd_prime(n) || n < 11) throw PreconditionError("n must be an odd prime >= 11");
  if (k <= 0) k = static_cast<long long>(n) * n * n;
  auto q = n_square_surface(n).complex;
  return sphere3_from(refine_surface(q), n, k, opt);
}

CubeComplex induct_dimension(const CubeComplex& s, std::size_t facet) {
  const int d = s.top_dim();
  if (d < 1) throw PreconditionError("induction needs a sphere of dimension at least 1");
  auto q = remove_facet(s, facet);
  auto p = cartesian_product(q, interval_complex(1));
  auto b = boundary_subcomplex(p);
  const auto nb = static_cast<VertexId>(b.complex.n_vertices());
  std::vector<VertexId> in_b(p.n_vertices(), kNone);
  for (VertexId x = 0; x < nb; ++x) in_b[b.to_parent[x]] = x;
  for (VertexId v = 0; v < p.n_vertices(); ++v)
    if (in_b[v] == kNone) throw ValidationError("vertex " + std::to_string(v) + " of Q×I is interior");
  std::vector<std::vector<VertexId>> cells;
  const VertexId ends[2] = {0, 1};
  for (const auto& cell : b.complex.top_cells())
    cells.push_back(cube_product(std::span<const VertexId>(cell), std::span<const VertexId>(ends, 2),
                                 [&](VertexId x, VertexId side) { return side * nb + x; }));
  for (VertexId side = 0; side < 2; ++side)
    for (const auto& cell : p.top_cells()) {
      std::vector<VertexId> c(cell.size());
      for (std::size_t i = 0; i < cell.size(); ++i) c[i] = side * nb + in_b[cell[i]];
      cells.push_back(std::move(c));
    }
  auto out = build_complex(d + 1, 2 * static_cast<std::size_t>(nb), cells);
  auto v = validate(out, 4);
  if (!v.is_complex) throw ValidationError("induction step is not a cube complex: " + v.violations.front().reason);
  return out;
}

SphereDResult sphere_d(int d, std::size_t n, const BuildOptions& opt) {
  if (d < 3) throw PreconditionError("sphere_d needs d >= 3");
  if (n < (std::size_t{1} << (d + 1))) throw PreconditionError("vertex budget below 2^(d+1)");
  SphereDResult out;
  out.d = d;
  out.budget = n;
  const std::size_t factor = std::size_t{1} << (2 * (d - 3));
  const std::size_t budget3 = n / factor;
  std::optional<SurfaceRefinement> chosen;
  std::size_t need11 = 0;
  for (int p = 11; p <= 101; p += 2) {
    if (!is_odd_prime(p)) continue;
    auto r = refine_surface(n_square_surface(p).complex);
    BuildOptions probe_opt;
    probe_opt.structural = true;
    auto probe = sphere3_from(r, p, 1, probe_opt);
    const std::size_t f0 = r.q.n_vertices();
    const std::size_t extra = probe.census.measured_vertices - 2 * f0;
    if (p == 11) need11 = probe.census.measured_vertices;
    if (budget3 < extra + 2 * f0) break;
    const long long kmax = static_cast<long long>((budget3 - extra) / f0) - 1;
    const long long k = std::min<long long>(static_cast<long long>(p) * p * p, kmax);
    chosen = std::move(r);
    out.n_param = p;
    out.k = k;
    if (k < static_cast<long long>(p) * p * p) break;
  }
  if (!chosen) {
    out.note = "budget too small: n=11, k=1 needs " + std::to_string(need11 * factor) + " vertices";
    return out;
  }
  auto res = sphere3_from(*chosen, out.n_param, out.k, opt);
  out.census = res.census;
  if (res.complex) {
    CubeComplex c = std::move(*res.complex);
    for (int i = 3; i < d; ++i) c = induct_dimension(c);
    out.vertices = c.n_vertices();
    out.facets = c.count(d);
    out.full = true;
    out.complex = std::move(c);
  } else {
    out.vertices = res.census.measured_vertices * factor;
    out.facets = res.census.facets << (d - 3);
    out.note = "structural: fill interiors not counted; " + res.failure;
  }
  out.within_budget = out.vertices <= n;
  return out;
}

}  // namespace cubesphere
