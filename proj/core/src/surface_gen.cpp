#include "cubesphere/surface_gen.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cubesphere/error.hpp"
#include "cubesphere/transforms.hpp"

namespace cubesphere {

bool is_odd_prime(long long n) {
  if (n < 3 || n % 2 == 0) return false;
  for (long long q = 3; q * q <= n; q += 2)
    if (n % q == 0) return false;
  return true;
}

int d_max_for(int n) {
  int d = (n - 1) / 10;
  while (d > 0 && (d % 2 == 0 || 10 * d >= n)) --d;
  return d;
}

CirculantBipartite build_graph(int n) {
  if (!is_odd_prime(n)) throw PreconditionError(std::to_string(n) + " is not an odd prime");
  if (n < 11) throw PreconditionError("n must be at least 11");
  return {n, d_max_for(n)};
}

std::size_t RotationSurface::even_count() const {
  return std::count_if(cycles.begin(), cycles.end(), [](const BoundaryCycle& c) { return c.even; });
}
std::size_t RotationSurface::odd_count() const { return cycles.size() - even_count(); }

long long RotationSurface::euler() const {
  return 2LL * graph.n - static_cast<long long>(graph.edge_count()) + static_cast<long long>(cycles.size());
}

RotationSurface trace_cycles(const CirculantBipartite& g) {
  RotationSurface r;
  r.graph = g;
  for (int d = 1; d <= g.d_max; ++d) {
    r.rotation.push_back(d);
    r.rotation.push_back(-d);
  }
  const int deg = static_cast<int>(r.rotation.size());
  auto pos = [&](int label) { return label > 0 ? 2 * (label - 1) : 2 * (-label - 1) + 1; };
  auto neighbor = [&](VertexId v, int label) {
    int i = g.index(v) + label;
    return g.is_left(v) ? g.right(i) : g.left(i);
  };
  std::vector<char> seen(2 * static_cast<std::size_t>(g.n) * deg, 0);
  for (VertexId v0 = 0; v0 < static_cast<VertexId>(2 * g.n); ++v0)
    for (int l0 : r.rotation) {
      if (seen[v0 * deg + pos(l0)]) continue;
      BoundaryCycle c;
      VertexId v = v0;
      int l = l0;
      while (!seen[v * deg + pos(l)]) {
        seen[v * deg + pos(l)] = 1;
        c.vertices.push_back(v);
        c.labels.push_back(l);
        VertexId w = neighbor(v, l);
        // Leave w by the strip preceding the arrival strip counterclockwise.
        l = r.rotation[(pos(-l) + deg - 1) % deg];
        v = w;
      }
      c.even = std::all_of(c.labels.begin(), c.labels.end(), [](int x) { return x > 0; });
      r.cycles.push_back(std::move(c));
    }
  std::stable_sort(r.cycles.begin(), r.cycles.end(), [](const BoundaryCycle& a, const BoundaryCycle& b) {
    auto ma = *std::min_element(a.vertices.begin(), a.vertices.end());
    auto mb = *std::min_element(b.vertices.begin(), b.vertices.end());
    return std::pair(ma, !a.even) < std::pair(mb, !b.even);
  });
  return r;
}

namespace {

std::vector<VertexId> cyclic_slice(const std::vector<VertexId>& c, std::size_t from, std::size_t len) {
  std::vector<VertexId> out;
  for (std::size_t t = 0; t <= len; ++t) out.push_back(c[(from + t) % c.size()]);
  return out;
}

}  // namespace

CyclePathSplit split_paths(const RotationSurface& r) {
  const auto& g = r.graph;
  const int n = g.n, D = g.d_max;
  CyclePathSplit out;
  for (const auto& bc : r.cycles) {
    CycleSplit s;
    s.even = bc.even;
    s.anchor_left = bc.even;
    const std::size_t L = bc.vertices.size();
    if (bc.even) {
      // Start at the smallest left vertex; cut at left vertices into three even pieces.
      std::size_t st = 0;
      for (std::size_t t = 0; t < L; ++t)
        if (g.is_left(bc.vertices[t]) && bc.vertices[t] < bc.vertices[st]) st = t;
      if (!g.is_left(bc.vertices[st])) ++st;
      s.cycle = cyclic_slice(bc.vertices, st, L - 1);
      s.whole.push_back(cyclic_slice(s.cycle, 0, L));
      const std::size_t l1 = 2 * (static_cast<std::size_t>(n) / 3);
      s.segments.push_back(cyclic_slice(s.cycle, 0, l1));
      s.segments.push_back(cyclic_slice(s.cycle, l1, l1));
      s.segments.push_back(cyclic_slice(s.cycle, 2 * l1, L - 2 * l1));
    } else {
      std::vector<VertexId> rev(bc.vertices.rbegin(), bc.vertices.rend());
      auto diff = [&](std::size_t t) {
        return ((g.index(rev[(t + 1) % L]) - g.index(rev[t])) % n + n) % n;
      };
      std::size_t st = L;
      for (std::size_t t = 0; t < L; ++t)
        if (diff(t) == 1 && diff((t + L - 1) % L) == D) {
          st = t;
          break;
        }
      if (st == L) throw ValidationError("odd cycle has no wrap step");
      s.cycle = cyclic_slice(rev, st, L - 1);
      const std::size_t periods = L / D;
      std::vector<std::pair<std::size_t, std::size_t>> span;  // trimmed [a, b] in cycle positions
      for (std::size_t t = 0; t < periods; ++t) {
        s.periods.push_back(cyclic_slice(s.cycle, t * D, D));
        std::size_t a = g.is_left(s.cycle[(t * D) % L]) ? 1 : 0;
        std::size_t b = g.is_left(s.cycle[((t + 1) * D) % L]) ? D - 1 : D;
        span.emplace_back(t * D + a, t * D + b);
        s.trimmed.push_back(cyclic_slice(s.cycle, t * D + a, b - a));
      }
      for (std::size_t t = 0; t < periods; ++t) {
        std::size_t from = span[t].second;
        std::size_t to = t + 1 < periods ? span[t + 1].first : span[0].first + L;
        s.gaps.push_back(cyclic_slice(s.cycle, from, to - from));
        if (s.trimmed[t].size() > 1) s.segments.push_back(s.trimmed[t]);
        if (s.gaps[t].size() > 1) s.segments.push_back(s.gaps[t]);
      }
    }
    for (const auto& p : s.trimmed) out.path_count += p.size() > 1;
    for (const auto& p : s.gaps) out.path_count += p.size() > 1;
    out.path_count += s.whole.size();
    out.cycles.push_back(std::move(s));
  }
  out.c = static_cast<double>(out.path_count) / (2.0 * n);
  return out;
}

DivisibilityTable divisibility_table(int n, int d_max) {
  DivisibilityTable t;
  for (int d = 1; d <= d_max; ++d)
    for (int c = 0; d + c <= d_max; ++c) {
      ++t.entries;
      long long v = static_cast<long long>(c + 1) * (2 * d + c) / 2;
      if (v % n == 0 && t.ok) {
        t.ok = false;
        t.witness = {d, c};
      }
    }
  return t;
}

PropertyReport check_properties(const RotationSurface& r) {
  PropertyReport rep;
  const auto& g = r.graph;
  // (I): the endpoints of a two-step window determine it within its parity class.
  rep.prop_i = true;
  for (int parity = 0; parity < 2; ++parity) {
    std::map<std::pair<VertexId, VertexId>, std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t ci = 0; ci < r.cycles.size(); ++ci) {
      const auto& c = r.cycles[ci];
      if (c.even != (parity == 0)) continue;
      const std::size_t L = c.vertices.size();
      for (std::size_t t = 0; t < L; ++t) {
        ++rep.windows_checked;
        VertexId a = c.vertices[t], b = c.vertices[(t + 2) % L];
        auto key = std::minmax(a, b);
        auto [it, fresh] = seen.emplace(key, std::pair{ci, t});
        if (!fresh && rep.prop_i) {
          rep.prop_i = false;
          rep.witness = "(I) window " + std::to_string(a) + ",?," + std::to_string(b) + " in cycles " +
                        std::to_string(it->second.first) + " and " + std::to_string(ci);
        }
      }
    }
  }
  // (II): every window of at most ten steps is simple.
  rep.prop_ii = true;
  for (const auto& c : r.cycles) {
    const std::size_t L = c.vertices.size();
    const std::size_t w = std::min<std::size_t>(11, L);
    for (std::size_t t = 0; t < L && rep.prop_ii; ++t) {
      std::set<VertexId> vs;
      for (std::size_t u = 0; u < w; ++u) vs.insert(c.vertices[(t + u) % L]);
      if (vs.size() != w) {
        rep.prop_ii = false;
        if (rep.witness.empty()) rep.witness = "(II) repeated vertex near position " + std::to_string(t);
      }
    }
  }
  if (!rep.prop_ii) return rep;
  auto split = split_paths(r);
  rep.c = split.c;
  rep.prop_iii = split.c <= kPathConstant;
  for (const auto& s : split.cycles)
    for (const auto& p : s.segments) {
      std::set<VertexId> vs(p.begin(), p.end());
      bool ends = g.is_left(p.front()) == s.anchor_left && g.is_left(p.back()) == s.anchor_left;
      if (vs.size() != p.size() || !ends || (p.size() - 1) % 2 != 0) {
        rep.prop_iii = false;
        if (rep.witness.empty()) rep.witness = "(III) bad path piece";
      }
    }
  return rep;
}

CubeComplex cubulate_cycles(const CirculantBipartite& g, const RotationSurface&, const CyclePathSplit& p) {
  VertexId next = static_cast<VertexId>(2 * g.n);
  std::vector<std::vector<VertexId>> cells;
  for (const auto& s : p.cycles) {
    const std::size_t k = s.segments.size();
    if (k < 3) throw PreconditionError("a cycle needs at least three path pieces");
    const VertexId z = next++;
    std::vector<VertexId> cj(k), mj(k), xj(k);
    for (std::size_t j = 0; j < k; ++j) {
      cj[j] = next++;
      mj[j] = next++;
      xj[j] = next++;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto& seg = s.segments[j];
      const std::size_t jn = (j + 1) % k;
      for (std::size_t t = 0; t + 2 < seg.size(); t += 2) cells.push_back(quad(xj[j], seg[t], seg[t + 1], seg[t + 2]));
      cells.push_back(quad(xj[j], seg.back(), cj[jn], mj[j]));
      cells.push_back(quad(xj[j], mj[j], cj[j], seg.front()));
      cells.push_back(quad(z, cj[j], mj[j], cj[jn]));
    }
  }
  auto c = build_complex(2, next, cells);
  auto rep = validate(c, 1);
  if (!rep.is_complex) {
    const auto& v = rep.violations.front();
    auto show = [&](int k, std::size_t i) {
      std::string s;
      for (auto x : c.cell(k, i)) s += " " + std::to_string(x);
      return s;
    };
    throw ValidationError("cubulation invalid: cells [" + show(v.dim_a, v.cell_a) + " ] and [" +
                          show(v.dim_b, v.cell_b) + " ]: " + v.reason);
  }
  return c;
}

SquareSurface n_square_surface(int n) {
  SquareSurface s;
  auto g = build_graph(n);
  s.rotation = trace_cycles(g);
  s.properties = check_properties(s.rotation);
  if (!s.properties.prop_ii) throw ValidationError("property (II) fails: " + s.properties.witness);
  s.split = split_paths(s.rotation);
  s.complex = cubulate_cycles(g, s.rotation, s.split);
  if (s.complex.count(2) % 2) {
    s.complex = apply_gadget(s.complex, 2, 0, Gadget::Square10);
    s.ten_applied = true;
  }
  return s;
}

}  // namespace cubesphere
