#include <doctest.h>

#include <map>

#include "cubesphere/basis.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/surface_gen.hpp"
#include "cubesphere/transforms.hpp"

using namespace cubesphere;

namespace {

CubeComplex torus44() { return cartesian_product(cycle_complex(4), cycle_complex(4)); }

CubeComplex genus_two() {
  auto t = torus44();
  auto p = remove_facet(t, 0);
  auto sq = t.cell(2, 0);
  VertexMap m;
  for (auto v : sq) m.emplace_back(v, v);
  return glue(p, p, m).complex;
}

// Crossings per (curve, edge), counted directly.
std::size_t max_crossings(const std::vector<SurfaceCurve>& curves) {
  std::size_t best = 0;
  for (const auto& c : curves) {
    std::map<std::uint32_t, std::size_t> n;
    for (const auto& x : c.crossings) best = std::max(best, ++n[x.edge]);
  }
  return best;
}

std::vector<long long> betti_q(const CubeComplex& c) { return betti_numbers(c, Coefficients::rationals()).betti; }

}  // namespace

TEST_CASE("torus basis is one handle") {
  auto q = torus44();
  auto b = canonical_basis(q);
  CHECK(b.genus == 1);
  REQUIRE(b.curves.size() == 2);
  CHECK(b.intersections[0][1] == 1);
  CHECK(b.intersections[0][0] == 0);
  CHECK(crossing_bound(b.curves).max == max_crossings(b.curves));
  CHECK(verify_curve_basis(q, b).ok());
}

TEST_CASE("sphere has an empty basis") {
  auto b = canonical_basis(cube_sphere(2));
  CHECK(b.genus == 0);
  CHECK(b.curves.empty());
}

TEST_CASE("genus two basis") {
  auto q = genus_two();
  REQUIRE(surface_invariants(q).genus == 2);
  auto b = canonical_basis(q);
  REQUIRE(b.curves.size() == 4);
  CHECK(canonical_pattern(b.intersections));
  CHECK(crossing_bound(b.curves).max <= 2);
  CHECK(crossing_bound(b.curves).max == max_crossings(b.curves));
  CHECK(verify_curve_basis(q, b).ok());
}

TEST_CASE("canonical pattern") {
  CHECK(canonical_pattern({{0, 1}, {1, 0}}));
  CHECK_FALSE(canonical_pattern({{0, 1}, {0, 0}}));
  CHECK_FALSE(canonical_pattern({{0, 2}, {2, 0}}));
  CHECK_FALSE(canonical_pattern({{0, 1, 0, 1}, {1, 0, 0, 0}, {0, 0, 0, 1}, {1, 0, 1, 0}}));
}

TEST_CASE("duplicated curve is rejected") {
  auto q = genus_two();
  auto b = canonical_basis(q);
  b.curves[1] = b.curves[0];
  b.intersections = curve_intersections(q, b.curves);
  CHECK_FALSE(verify_curve_basis(q, b).ok());
}

TEST_CASE("refinement of the torus") {
  auto q = torus44();
  auto b = canonical_basis(q);
  auto r = refine_with_basis(q, b);
  auto census = refine_census(q, b);
  REQUIRE(!census.empty());
  CHECK(census.back().f.f == r.complex.fvector().f);
  CHECK(r.census.back().f.f == r.complex.fvector().f);
  CHECK(validate(r.complex).is_complex);
  CHECK(surface_invariants(r.complex).genus == 1);
  for (const auto& ch : r.edge_chains) CHECK(ch.size() % 2 == 1);
  for (const auto& c : r.basis.curves) CHECK(c.size() % 2 == 0);
  CHECK(verify_basis(r.complex, r.basis).ok());
  for (const auto& s : census) {
    if (s.step == "polygon_centers") CHECK(s.f.f[1] == 2 * s.f.f[2]);
    CHECK(s.f.euler() == 0);
  }
  CHECK(census.back().f.f[2] == 5 * census[census.size() - 2].f.f[2]);
  CHECK(betti_q(q) == betti_q(r.complex));
}

TEST_CASE("duplicated edge path is rejected") {
  auto q = torus44();
  auto r = refine_with_basis(q, canonical_basis(q));
  auto b = r.basis;
  b.curves[1] = b.curves[0];
  CHECK_FALSE(verify_basis(r.complex, b).ok());
}

TEST_CASE("regularized neighborhoods") {
  auto q = genus_two();
  auto r = refine_with_basis(q, canonical_basis(q));
  auto g = regularize_neighborhoods(r);
  CHECK(validate(g.complex).is_complex);
  CHECK(surface_invariants(g.complex).genus == 2);
  REQUIRE(g.certs.size() == 4);
  for (const auto& c : g.certs) CHECK(c.ok);
  for (const auto& c : g.basis.curves) CHECK(c.size() % 2 == 0);
  CHECK(verify_basis(g.complex, g.basis).ok());
  CHECK(betti_q(r.complex) == betti_q(g.complex));
  CHECK(g.complex.count(2) == r.complex.count(2) + g.added_squares);
}

TEST_CASE("vertex link is not a regular neighborhood") {
  auto q = split_all_squares5(torus44());
  // Link of vertex 0: the boundary of its star, walked around.
  auto s = orient_surface(q);
  std::map<VertexId, std::vector<VertexId>> adj;
  for (const auto& cyc : s.cycle)
    for (int t = 0; t < 4; ++t)
      if (cyc[t] == 0) {
        auto a = cyc[(t + 1) % 4], m = cyc[(t + 2) % 4], c = cyc[(t + 3) % 4];
        adj[a].push_back(m);
        adj[m].push_back(a);
        adj[m].push_back(c);
        adj[c].push_back(m);
      }
  std::vector<VertexId> link{adj.begin()->first};
  VertexId prev = kNone;
  while (true) {
    auto cur = link.back();
    auto nx = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    if (nx == link.front()) break;
    prev = cur;
    link.push_back(nx);
  }
  REQUIRE(link.size() >= 8);
  auto cert = neighborhood_certificate(q, link);
  CHECK_FALSE(cert.ok);
  CHECK(!cert.reason.empty());
}

TEST_CASE("square surface at n=31 stays within two crossings") {
  auto q = n_square_surface(31).complex;
  auto b = canonical_basis(q);
  CHECK(b.genus == 61);
  CHECK(crossing_bound(b.curves).max <= 2);
  CHECK(canonical_pattern(b.intersections));
}
