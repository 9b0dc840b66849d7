#include <doctest.h>

#include <map>
#include <set>

#include "cubesphere/error.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/surface.hpp"
#include "cubesphere/surface_gen.hpp"

using namespace cubesphere;

namespace {
std::vector<int> primes_between(int a, int b) {
  std::vector<int> out;
  for (int p = a; p <= b; ++p)
    if (is_odd_prime(p)) out.push_back(p);
  return out;
}
}  // namespace

TEST_CASE("d_max") {
  CHECK(d_max_for(11) == 1);
  CHECK(d_max_for(31) == 3);
  CHECK(d_max_for(101) == 9);
  CHECK(d_max_for(97) == 9);
  CHECK_THROWS_AS(build_graph(15), PreconditionError);
  CHECK_THROWS_AS(build_graph(7), PreconditionError);
}

TEST_CASE("traced cycles conserve darts and split into even and odd") {
  for (int n : primes_between(11, 101)) {
    auto r = trace_cycles(build_graph(n));
    const int D = r.graph.d_max;
    std::size_t total = 0;
    for (const auto& c : r.cycles) {
      total += c.vertices.size();
      if (c.even) CHECK(c.vertices.size() == 2u * n);
      else CHECK(c.vertices.size() == 2u * n * D);
      // consecutive vertices are adjacent in the circulant graph
      for (std::size_t t = 0; t < c.vertices.size(); ++t) {
        auto a = c.vertices[t], b = c.vertices[(t + 1) % c.vertices.size()];
        CHECK(r.graph.is_left(a) != r.graph.is_left(b));
      }
    }
    CHECK(total == 2 * r.graph.edge_count());
    CHECK(r.even_count() == static_cast<std::size_t>(D));
    CHECK(r.odd_count() == 1);
    CHECK(r.genus() == (2LL * n - 1) * (D - 1) / 2);
  }
}

TEST_CASE("odd cycle normalizes to repeating differences") {
  auto r = trace_cycles(build_graph(53));
  auto s = split_paths(r);
  const int n = 53, D = 5;
  for (const auto& cs : s.cycles) {
    if (cs.even) {
      CHECK(cs.segments.size() == 3);
      CHECK(cs.whole.size() == 1);
      continue;
    }
    for (std::size_t t = 0; t < cs.cycle.size(); ++t) {
      int d = ((r.graph.index(cs.cycle[(t + 1) % cs.cycle.size()]) - r.graph.index(cs.cycle[t])) % n + n) % n;
      CHECK(d == static_cast<int>(t % D) + 1);
    }
    CHECK(cs.periods.size() == 2u * n);
    for (const auto& p : cs.periods) CHECK(p.size() == static_cast<std::size_t>(D) + 1);
    for (const auto& p : cs.trimmed) CHECK(p.size() == static_cast<std::size_t>(D));
    CHECK(cs.segments.size() == 3u * n);
  }
}

TEST_CASE("segments tile each cycle") {
  for (int n : {11, 31, 61}) {
    auto s = split_paths(trace_cycles(build_graph(n)));
    for (const auto& cs : s.cycles) {
      std::vector<VertexId> walk;
      for (const auto& seg : cs.segments) {
        if (!walk.empty()) CHECK(walk.back() == seg.front());
        walk.insert(walk.end(), seg.begin() + (walk.empty() ? 0 : 1), seg.end());
      }
      REQUIRE(walk.size() == cs.cycle.size() + 1);
      CHECK(walk.front() == walk.back());
      std::multiset<VertexId> a(walk.begin(), walk.end() - 1), b(cs.cycle.begin(), cs.cycle.end());
      CHECK(a == b);
    }
  }
}

TEST_CASE("divisibility table against a direct count") {
  for (int n : primes_between(11, 211)) {
    int D = d_max_for(n);
    auto t = divisibility_table(n, D);
    std::size_t entries = 0;
    bool hit = false;
    for (int d = 1; d <= D; ++d)
      for (int c = 0; c <= D - d; ++c) {
        ++entries;
        hit |= ((c + 1) * (2 * d + c) / 2) % n == 0;
      }
    CHECK(t.entries == entries);
    CHECK(t.ok == !hit);
  }
  auto bad = divisibility_table(7, 6);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness);
}

TEST_CASE("window properties hold over the prime range") {
  for (int n : primes_between(11, 101)) {
    auto rep = check_properties(trace_cycles(build_graph(n)));
    INFO("n = " << n << " " << rep.witness);
    CHECK(rep.prop_i);
    CHECK(rep.prop_ii);
    CHECK(rep.prop_iii);
    CHECK(rep.c <= kPathConstant);
  }
}

TEST_CASE("duplicated cycle breaks window uniqueness") {
  auto r = trace_cycles(build_graph(31));
  for (const auto& c : r.cycles)
    if (c.even) {
      r.cycles.push_back(c);
      break;
    }
  auto rep = check_properties(r);
  CHECK_FALSE(rep.prop_i);
  CHECK(rep.witness.find("(I)") == 0);
}

TEST_CASE("square surface is a closed orientable surface of the traced genus") {
  for (int n : {11, 13, 31, 41}) {
    auto s = n_square_surface(n);
    INFO("n = " << n);
    CHECK(validate(s.complex).is_complex);
    auto inv = surface_invariants(s.complex);
    CHECK(inv.closed);
    CHECK(inv.orientable);
    CHECK(inv.components == 1);
    CHECK(inv.genus == s.rotation.genus());
    CHECK(s.complex.count(2) % 2 == 0);
    CHECK(s.complex.count(2) >= static_cast<std::size_t>(n) * s.rotation.graph.d_max);
    auto h = betti_numbers(s.complex, Coefficients::mod(2));
    CHECK(h.betti[1] == 2 * inv.genus);
  }
}
