#include <doctest.h>

#include "cubesphere/error.hpp"
#include "cubesphere/fillball.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/io.hpp"
#include "cubesphere/transforms.hpp"

using namespace cubesphere;

namespace {

// Spheres obtained from the cube boundary by repeated 5-splits at varying squares.
std::vector<CubeComplex> insert_corpus(std::size_t count) {
  std::vector<CubeComplex> out;
  for (std::size_t seed = 0; out.size() < count; ++seed) {
    auto c = cube_sphere(2);
    for (std::size_t step = 0; step <= seed % 4; ++step)
      c = apply_gadget(c, 2, (seed * 5 + step * 3) % c.count(2), Gadget::InsertSquare5);
    out.push_back(c);
  }
  return out;
}

}  // namespace

TEST_CASE("cube boundary fills with one cube") {
  auto s = cube_sphere(2);
  auto cert = fill_ball(s);
  CHECK(cert.ball.count(3) == 1);
  CHECK(cert.square_map.size() == 6);
  CHECK(verify_filling(cert, s).ok);
}

TEST_CASE("one 5-split face") {
  auto s = apply_gadget(cube_sphere(2), 2, 0, Gadget::InsertSquare5);
  REQUIRE(s.count(2) == 10);
  auto cert = fill_ball(s);
  CHECK(cert.ball.count(3) == 2);
  CHECK(verify_filling(cert, s).ok);
  // Independent oracle: a homology ball with the right boundary count.
  auto b = betti_numbers(cert.ball, Coefficients::mod(3));
  CHECK(b.betti == std::vector<long long>{1, 0, 0, 0});
  CHECK(boundary_complex(cert.ball).count(2) == 10);
}

TEST_CASE("preconditions") {
  auto odd = apply_gadget(cube_sphere(2), 2, 0, Gadget::Square10);
  REQUIRE(odd.count(2) % 2 == 1);
  CHECK_THROWS_AS(fill_ball(odd), PreconditionError);
  CHECK_THROWS_AS(fill_ball(torus_complex(2)), PreconditionError);
  CHECK_THROWS_AS(fill_ball(solid_cube(3)), PreconditionError);
}

TEST_CASE("removing a cube breaks the certificate") {
  auto s = apply_gadget(cube_sphere(2), 2, 0, Gadget::InsertSquare5);
  auto cert = fill_ball(s);
  auto cubes = cert.ball.top_cells();
  cubes.pop_back();
  FillCertificate broken{build_complex(3, cert.ball.n_vertices(), cubes), {}, 0};
  for (std::size_t i = 0; i < s.count(2); ++i)
    if (auto j = broken.ball.find_canonical(2, s.cell(2, i))) broken.square_map.emplace_back(i, *j);
  auto r = verify_filling(broken, s);
  CHECK_FALSE(r.ok);
  CHECK(!r.witness.empty());
}

TEST_CASE("wrong square map is rejected") {
  auto s = cube_sphere(2);
  auto cert = fill_ball(s);
  std::swap(cert.square_map[0].second, cert.square_map[1].second);
  CHECK_FALSE(verify_filling(cert, s).ok);
}

TEST_CASE("certificate file round trip") {
  auto s = apply_gadget(cube_sphere(2), 2, 3, Gadget::InsertSquare5);
  auto cert = fill_ball(s);
  auto back = parse_certificate(serialize_certificate(cert));
  CHECK(back.ball == cert.ball);
  CHECK(back.square_map == cert.square_map);
  CHECK(verify_filling(back, s).ok);
  CHECK_THROWS_AS(parse_certificate(serialize(cert.ball) + "bmap x 1\n"), PreconditionError);
}

TEST_CASE("search is deterministic") {
  auto s = insert_corpus(6).back();
  auto a = fill_ball(s), b = fill_ball(s);
  CHECK(a.ball == b.ball);
  CHECK(a.square_map == b.square_map);
}

TEST_CASE("every emitted certificate verifies") {
  std::size_t filled = 0;
  for (const auto& s : insert_corpus(20)) {
    try {
      auto cert = fill_ball(s, {2000, 16});
      CHECK(verify_filling(cert, s).ok);
      ++filled;
    } catch (const FillFailed& e) {
      CHECK(e.stats().expanded > 0);
    }
  }
  CHECK(filled > 0);
}

TEST_CASE("exhausted budget fails explicitly") {
  auto t = apply_gadget(cube_sphere(2), 2, 0, Gadget::Square10);
  auto s = apply_gadget(t, 2, 9, Gadget::Square10);
  REQUIRE(s.count(2) % 2 == 0);
  try {
    fill_ball(s, {50, 16});
    CHECK(false);
  } catch (const FillFailed& e) {
    CHECK(e.stats().expanded == 50);
    CHECK(std::string(e.what()).find("FILL_FAILED") == 0);
  }
}
