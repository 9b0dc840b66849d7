#include <algorithm>
#include <numeric>
#include <random>

#include "cubesphere/complex.hpp"
#include "cubesphere/error.hpp"
#include "cubesphere/io.hpp"
#include "cubesphere/transforms.hpp"
#include "doctest.h"

using namespace cubesphere;

namespace {

// Lexicographic minimum over every signed coordinate permutation.
std::vector<VertexId> brute_canonical(const std::vector<VertexId>& q) {
  int k = 0;
  while ((std::size_t{1} << k) < q.size()) ++k;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<VertexId> best;
  do {
    for (std::size_t r = 0; r < q.size(); ++r) {
      std::vector<VertexId> cand(q.size());
      for (std::size_t c = 0; c < q.size(); ++c) {
        std::size_t src = 0;
        for (int t = 0; t < k; ++t)
          if (c >> t & 1) src |= std::size_t{1} << perm[t];
        cand[c] = q[r ^ src];
      }
      if (best.empty() || cand < best) best = cand;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<VertexId> random_symmetry(const std::vector<VertexId>& q, std::mt19937& rng) {
  int k = 0;
  while ((std::size_t{1} << k) < q.size()) ++k;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::size_t r = rng() % q.size();
  std::vector<VertexId> out(q.size());
  for (std::size_t c = 0; c < q.size(); ++c) {
    std::size_t src = 0;
    for (int t = 0; t < k; ++t)
      if (c >> t & 1) src |= std::size_t{1} << perm[t];
    out[c] = q[r ^ src];
  }
  return out;
}

}  // namespace

TEST_CASE("canonical form matches brute force over all symmetries") {
  std::mt19937 rng(7);
  for (int k = 1; k <= 4; ++k)
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<VertexId> q(std::size_t{1} << k);
      std::iota(q.begin(), q.end(), 0u);
      std::shuffle(q.begin(), q.end(), rng);
      for (auto& v : q) v = v * 3 + 1;
      CHECK(canonicalize(q).corners == brute_canonical(q));
    }
}

TEST_CASE("canonical sign tracks orientation") {
  std::vector<VertexId> sq{0, 1, 2, 3};
  CHECK(canonicalize(sq).sign == 1);
  CHECK(canonicalize(std::vector<VertexId>{0, 2, 1, 3}).sign == -1);  // axes swapped
  CHECK(canonicalize(std::vector<VertexId>{1, 0, 3, 2}).sign == -1);  // one reflection
  CHECK(canonicalize(std::vector<VertexId>{3, 2, 1, 0}).sign == 1);   // two reflections
}

TEST_CASE("build_complex face lattices") {
  auto cube = solid_cube(3);
  CHECK(cube.fvector().f == std::vector<std::size_t>{8, 12, 6, 1});
  auto s = cube_sphere(2);
  CHECK(s.fvector().f == std::vector<std::size_t>{8, 12, 6});
  CHECK_THROWS_AS(build_complex(2, {{0, 1, 2}}), PreconditionError);
  CHECK_THROWS_AS(build_complex(2, {{0, 1, 1, 3}}), PreconditionError);
  CHECK_THROWS_AS(build_complex(1, {{0, 1, 2, 3}}), PreconditionError);
}

TEST_CASE("canonicalization soundness: re-adding under symmetries keeps the f-vector") {
  std::mt19937 rng(11);
  auto c = cube_sphere(3);
  auto cells = c.top_cells();
  auto base = c.fvector();
  for (int trial = 0; trial < 10; ++trial) {
    auto more = cells;
    for (const auto& q : cells) more.push_back(random_symmetry(q, rng));
    std::shuffle(more.begin(), more.end(), rng);
    CHECK(build_complex(3, c.n_vertices(), more).fvector() == base);
  }
}

TEST_CASE("validate") {
  CHECK(validate(cube_sphere(2)).is_complex);
  CHECK(validate(cube_sphere(2)).is_closed_pseudomanifold);
  // Same four vertices, cyclic orders 0-1-3-2 and 0-2-1-3.
  auto bad = build_complex(2, {{0, 1, 2, 3}, quad(0, 2, 1, 3)});
  auto r = validate(bad);
  CHECK_FALSE(r.is_complex);
  CHECK_FALSE(r.violations.empty());
  // Two squares sharing a diagonal only.
  auto diag = build_complex(2, {quad(0, 1, 2, 3), quad(0, 4, 2, 5)});
  CHECK_FALSE(validate(diag).is_complex);
  // Two squares sharing an edge.
  CHECK(validate(build_complex(2, {quad(0, 1, 2, 3), quad(0, 1, 4, 5)})).is_complex);
  // Empty and zero-dimensional complexes.
  CHECK(validate(build_complex(0, 0, {})).is_complex);
  CHECK(validate(build_complex(0, 3, {})).is_complex);
}

TEST_CASE("pseudomanifold check") {
  CHECK(pseudomanifold_check(cube_sphere(2)));
  CHECK(pseudomanifold_check(cube_sphere(3)));
  CHECK_FALSE(pseudomanifold_check(solid_cube(3)));
}

TEST_CASE("vertex links") {
  auto l = vertex_link(cube_sphere(2), 0);
  CHECK(l.vertices.size() == 3);
  CHECK(l.simplices.size() == 3);
  CHECK(l.dim() == 1);
  auto l4 = vertex_link(cube_sphere(3), 0);
  CHECK(l4.vertices.size() == 4);
  CHECK(l4.simplices.size() == 4);
  CHECK(l4.dim() == 2);
  auto l3 = vertex_link(solid_cube(3), 0);
  CHECK(l3.simplices.size() == 1);
  CHECK(l3.dim() == 2);
  CHECK_THROWS_AS(vertex_link(solid_cube(3), 99), PreconditionError);
}

TEST_CASE("manifold check") {
  CHECK(manifold_check(cube_sphere(2), 2).ok);
  CHECK(manifold_check(cube_sphere(3), 3).ok);
  auto m4 = manifold_check(cube_sphere(4), 4);
  CHECK(m4.ok);
  CHECK_FALSE(m4.links_checked);
  // Two 3-spheres sharing one vertex.
  auto a = cube_sphere(3);
  auto two = glue(a, a, {{0, 0}}, true).complex;
  CHECK_FALSE(manifold_check(two, 3).ok);
  // Antipodal vertices of one 3-sphere pinched together: still a pseudomanifold.
  auto pinched = identify(a, {{0, 15}}, false);
  CHECK(pseudomanifold_check(pinched));
  auto r = manifold_check(pinched, 3);
  CHECK_FALSE(r.ok);
  REQUIRE(r.bad_vertex.has_value());
  CHECK(*r.bad_vertex == 0);
}

TEST_CASE("upper bounds") {
  auto r = upper_bound_checks(cube_sphere(2));
  CHECK(r.diagonal_bound == doctest::Approx(14.0));
  CHECK(r.ok());
  auto r4 = upper_bound_checks(cube_sphere(3));
  CHECK(r4.diagonal_bound == doctest::Approx(30.0));
  CHECK(r4.quadratic_checked);
  CHECK(r4.ok());
}

TEST_CASE("bipartite classes") {
  auto col = bipartite_classes(cube_sphere(2));
  CHECK(std::count(col.begin(), col.end(), 0) == 4);
  CHECK(col[0] == 0);
  CHECK_THROWS_AS(bipartite_classes(cycle_complex(5)), PreconditionError);
}

TEST_CASE("interchange format round trip") {
  for (const auto& c : {cube_sphere(2), solid_cube(3), torus_complex(2), warmup_complex(2, 2)}) {
    auto text = serialize(c);
    auto back = parse_complex(text);
    CHECK(back == c);
    CHECK(serialize(back) == text);
  }
  auto c = parse_complex("# comment\ncubecomplex 1 3\ncube 1 0 1  # trailing\n\ncube 1 1 2\n");
  CHECK(c.fvector().f == std::vector<std::size_t>{3, 2});
  CHECK_THROWS_AS(parse_complex("cubecomplex 2 4\ncube 2 0 1 2\n"), PreconditionError);
  CHECK_THROWS_AS(parse_complex("cube 1 0 1\n"), PreconditionError);
}

TEST_CASE("cell order does not affect the built complex") {
  std::mt19937 rng(3);
  auto c = warmup_complex(2, 2);
  auto cells = c.top_cells();
  for (int t = 0; t < 5; ++t) {
    std::shuffle(cells.begin(), cells.end(), rng);
    CHECK(build_complex(2, c.n_vertices(), cells) == c);
  }
}
