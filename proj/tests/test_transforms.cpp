#include <random>

#include "cubesphere/error.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/transforms.hpp"
#include "doctest.h"

using namespace cubesphere;

namespace {

std::vector<std::size_t> convolve(const FVector& a, const FVector& b) {
  std::vector<std::size_t> out(a.f.size() + b.f.size() - 1, 0);
  for (std::size_t i = 0; i < a.f.size(); ++i)
    for (std::size_t j = 0; j < b.f.size(); ++j) out[i + j] += a.f[i] * b.f[j];
  return out;
}

std::vector<long long> betti(const CubeComplex& c) { return betti_numbers(c, Coefficients::rationals()).betti; }

}  // namespace

TEST_CASE("products") {
  auto e = interval_complex(1);
  CHECK(cartesian_product(e, e).fvector().f == std::vector<std::size_t>{4, 4, 1});
  auto t = cartesian_product(cycle_complex(4), cycle_complex(4));
  CHECK(t.fvector().f == std::vector<std::size_t>{16, 32, 16});
  CHECK(validate(t).is_complex);
  for (const auto& [a, b] : {std::pair{cube_sphere(2), interval_complex(5)}, std::pair{warmup_complex(2, 2), cycle_complex(3)},
                             std::pair{solid_cube(2), torus_complex(2)}}) {
    auto p = cartesian_product(a, b);
    CHECK(p.fvector().f == convolve(a.fvector(), b.fvector()));
    CHECK(validate(p).is_complex);
  }
  auto q = cube_sphere(2);
  const int k = 7;
  auto qi = cartesian_product(q, interval_complex(k));
  CHECK(qi.n_vertices() == (k + 1) * q.n_vertices());
  CHECK(qi.count(3) == k * q.count(2));
}

TEST_CASE("intervals, cycles and tori") {
  CHECK(interval_complex(1).fvector().f == std::vector<std::size_t>{2, 1});
  CHECK(interval_complex(2).fvector().f == std::vector<std::size_t>{3, 2});
  CHECK(interval_complex(1331).fvector().f == std::vector<std::size_t>{1332, 1331});
  CHECK_THROWS_AS(interval_complex(0), PreconditionError);
  CHECK(torus_complex(1).fvector().f == std::vector<std::size_t>{4, 4});
  CHECK(betti(torus_complex(2)) == std::vector<long long>{1, 2, 1});
  auto s = warmup_complex(2, 2);
  auto prod = cartesian_product(s, torus_complex(2));
  CHECK(prod.count(4) == s.count(2) * 16);
}

TEST_CASE("gadgets") {
  auto sq = solid_cube(2);
  auto five = apply_gadget(sq, 2, 0, Gadget::InsertSquare5);
  CHECK(five.count(2) == 5);
  CHECK(five.n_vertices() == 8);
  CHECK(validate(five).is_complex);
  auto cube = solid_cube(3);
  auto seven = apply_gadget(cube, 3, 0, Gadget::InsetCube7);
  CHECK(seven.count(3) == 7);
  CHECK(seven.n_vertices() == 16);
  CHECK(validate(seven).is_complex);
  CHECK(boundary_complex(seven).fvector() == cube_sphere(2).fvector());
  auto ten = apply_gadget(sq, 2, 0, Gadget::Square10);
  CHECK(ten.count(2) == 10);
  CHECK(validate(ten).is_complex);
  CHECK_NOTHROW(bipartite_classes(ten));
  auto bd = boundary_subcomplex(ten);
  CHECK(bd.complex.fvector().f == std::vector<std::size_t>{4, 4});
  CHECK(bd.to_parent == std::vector<VertexId>{0, 1, 2, 3});
  CHECK(betti(ten) == std::vector<long long>{1, 0, 0});
  CHECK_THROWS_AS(apply_gadget(cube, 3, 0, Gadget::InsertSquare5), PreconditionError);
  CHECK_THROWS_AS(apply_gadget(cube, 2, 0, Gadget::InsertSquare5), PreconditionError);  // not maximal
  CHECK_THROWS_AS(apply_gadget(sq, std::vector<VertexId>{0, 1, 2, 9}, Gadget::InsertSquare5), PreconditionError);
}

TEST_CASE("randomized gadget applications keep validity and homology") {
  std::mt19937 rng(17);
  auto surf = torus_complex(2);
  auto base = betti(surf);
  for (int step = 0; step < 12; ++step) {
    auto idx = rng() % surf.count(2);
    surf = apply_gadget(surf, 2, idx, step % 3 ? Gadget::InsertSquare5 : Gadget::Square10);
    CHECK(validate(surf).is_complex);
    CHECK(betti(surf) == base);
  }
  auto s3 = cube_sphere(3);
  for (int step = 0; step < 6; ++step) {
    s3 = apply_gadget(s3, 3, rng() % s3.count(3), Gadget::InsetCube7);
    CHECK(validate(s3).is_complex);
    CHECK(betti(s3) == std::vector<long long>{1, 0, 0, 1});
  }
}

TEST_CASE("glue and identify") {
  auto c = solid_cube(3);
  auto g = glue(c, c, {{1, 0}, {3, 2}, {5, 4}, {7, 6}});
  CHECK(g.complex.fvector().f == std::vector<std::size_t>{12, 20, 11, 2});
  const int k = 6;
  auto ring = identify(interval_complex(k), {{0, k}});
  CHECK(ring.fvector().f == std::vector<std::size_t>{k, k});
  CHECK_THROWS_AS(glue(c, c, {{0, 0}, {7, 1}}), PreconditionError);  // not a cell map
  CHECK_THROWS_AS(identify(interval_complex(2), {{0, 1}}), PreconditionError);
}

TEST_CASE("boundary and facet removal") {
  CHECK(boundary_complex(solid_cube(3)).fvector() == cube_sphere(2).fvector());
  auto s = cube_sphere(3);
  for (std::size_t f = 0; f < s.count(3); ++f) {
    auto q = remove_facet(s, f);
    CHECK(q.count(3) == 7);
    CHECK(q.n_vertices() == 16);
    auto qi = cartesian_product(q, interval_complex(1));
    auto bq = boundary_complex(q);
    CHECK(boundary_complex(qi).count(3) == 2 * q.count(3) + bq.count(2));
  }
  CHECK_THROWS_AS(remove_facet(s, 8), PreconditionError);
}

TEST_CASE("cutting along curves") {
  auto t = torus_complex(2);
  auto cut = cut_along_curve(t, {0, 1, 2, 3});
  CHECK(cut.complex.fvector().euler() == 0);
  CHECK(cut.left.size() == 4);
  CHECK(cut.right.size() == 4);
  CHECK(boundary_complex(cut.complex).fvector().f == std::vector<std::size_t>{8, 8});
  auto s = cube_sphere(2);
  auto two = cut_along_curve(s, {0, 1, 3, 2});
  CHECK(surface_invariants(two.complex).components == 2);
  CHECK(two.complex.fvector().euler() == 2);
  CHECK_THROWS_AS(cut_along_curve(t, {0, 1, 3}), PreconditionError);
}

TEST_CASE("glue then cut recovers the pieces") {
  auto annulus = cartesian_product(cycle_complex(4), interval_complex(2));
  VertexMap seam;
  for (VertexId i = 0; i < 4; ++i) seam.emplace_back(i * 3 + 2, i * 3);
  auto g = glue(annulus, annulus, seam);
  std::vector<VertexId> curve;
  for (VertexId i = 0; i < 4; ++i) curve.push_back(i * 3 + 2);
  auto cut = cut_along_curve(g.complex, curve);
  auto f = cut.complex.fvector();
  auto a = annulus.fvector();
  for (int k = 0; k <= 2; ++k) CHECK(f[k] == 2 * a[k]);
}

TEST_CASE("warm-up complex counts") {
  for (int m = 2; m <= 4; ++m) {
    auto w = warmup_complex(m, 2);
    CHECK(w.n_vertices() == static_cast<std::size_t>(12 * m * m + 2));
    CHECK(w.count(2) == static_cast<std::size_t>(m * m * m * m + 10 * m * m));
    CHECK(validate(w).is_complex);
    CHECK(h1_trivial(w));
    auto lit = warmup_complex(m, 2, WarmupVariant::Literal);
    CHECK(lit.n_vertices() == static_cast<std::size_t>(12 * m * m + 2 * m + 2));
    CHECK(lit.count(2) == static_cast<std::size_t>(m * m * m * m + 10 * m * m));
    CHECK(validate(lit).is_complex);
    CHECK(h1_trivial(lit));
  }
  auto w3 = warmup_complex(2, 3);
  CHECK(w3.n_vertices() == 100);
  CHECK(w3.count(3) == 56);
  CHECK_THROWS_AS(warmup_complex(1, 2), PreconditionError);
}
