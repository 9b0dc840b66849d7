#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "cubesphere/fillball.hpp"
#include "cubesphere/io.hpp"
#include "cubesphere/complex.hpp"
#include "cubesphere/transforms.hpp"

using namespace cubesphere;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cubesphere_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("warm-up file and its f-vector row") {
  TempDir t;
  auto w = t / "w.cc";
  REQUIRE(run({"gen", "warmup", "--m", "2", "--d", "2", "-o", w}).code == 0);
  auto r = run({"fvector", w});
  CHECK(r.code == 0);
  CHECK(r.out == "2,50,100,56\n");
  CHECK(read_complex(w) == warmup_complex(2, 2));
}

TEST_CASE("verify with --manifold on the boundary of the 3-cube") {
  TempDir t;
  auto s = t / "s.cc";
  write_complex(s, cube_sphere(2));
  auto r = run({"verify", s, "--manifold"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"manifold\":{\"ok\":true") != std::string::npos);

  // Solid cube: a valid complex but not a closed 2-manifold.
  auto b = t / "b.cc";
  write_complex(b, solid_cube(3));
  CHECK(run({"verify", b}).code == 0);
  CHECK(run({"verify", b, "--manifold", "--d", "2"}).code == 1);
}

TEST_CASE("fill exit codes") {
  TempDir t;
  auto odd = t / "odd.cc";
  write_complex(odd, apply_gadget(cube_sphere(2), 2, 0, Gadget::Square10));
  auto r = run({"fill", odd});
  CHECK(r.code == 1);
  CHECK(r.err.find("odd") != std::string::npos);

  auto sq = t / "five.cc";
  auto ball = t / "ball.cc";
  write_complex(sq, apply_gadget(cube_sphere(2), 2, 0, Gadget::InsertSquare5));
  r = run({"fill", sq, "-o", ball, "--max-steps", "100"});
  CHECK(r.code == 0);
  auto cert = parse_certificate(read_text(ball));
  CHECK(verify_filling(cert, read_complex(sq)).ok);
  CHECK(run({"verify", ball, "--sphere", sq}).code == 0);
  // Certificate checked against the wrong sphere.
  auto plain = t / "plain.cc";
  write_complex(plain, cube_sphere(2));
  CHECK(run({"verify", ball, "--sphere", plain}).code == 1);

  auto even = t / "even.cc";
  write_complex(even, apply_gadget(apply_gadget(cube_sphere(2), 2, 0, Gadget::Square10), 2, 1, Gadget::Square10));
  r = run({"fill", even, "--max-steps", "20"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("FILL_FAILED", 0) == 0);
}

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({"gen", "warmup", "--m", "2"}).code == 64);
  CHECK(run({"fvector"}).code == 64);
  CHECK(run({"--format", "xml", "fvector", "x.cc"}).code == 64);
  auto r = run({"homology", "x.cc", "--coeff", "4"});
  CHECK(r.code == 64);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("missing and malformed input exit 1") {
  TempDir t;
  CHECK(run({"fvector", t / "none.cc"}).code == 1);
  auto bad = t / "bad.cc";
  write_text(bad, "cubecomplex 2 4\ncube 2 0 1 2\n");
  auto r = run({"fvector", bad});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("every written file re-parses to the same complex") {
  TempDir t;
  for (std::string fmt : {"cc", "json"}) {
    CAPTURE(fmt);
    auto a = t / ("a." + fmt), b = t / ("b." + fmt), p = t / ("p." + fmt), g = t / ("g." + fmt);
    auto s = t / ("s." + fmt), q = t / ("q." + fmt);
    REQUIRE(run({"--format", fmt, "gen", "warmup", "--m", "3", "--d", "2", "-o", a}).code == 0);
    write_complex(b, cycle_complex(4));
    REQUIRE(run({"--format", fmt, "product", a, b, "-o", p}).code == 0);
    REQUIRE(run({"--format", fmt, "gadget", "--name", "inset7", "--cell", "3", p, "-o", g}).code == 0);
    REQUIRE(run({"--format", fmt, "gen", "surface", "--n", "11", "-o", s}).code == 0);

    auto warm = warmup_complex(3, 2);
    auto prod = cartesian_product(warm, cycle_complex(4));
    CHECK(cli::load_complex_file(a) == warm);
    CHECK(cli::load_complex_file(p) == prod);
    CHECK(cli::load_complex_file(g) == apply_gadget(prod, 3, 3, Gadget::InsetCube7));
    auto surf = cli::load_complex_file(s);
    CHECK(run({"fvector", s}).out == std::to_string(surf.top_dim()) + "," + surf.fvector().csv() + "\n");

    // Same command, same bytes.
    REQUIRE(run({"--format", fmt, "gen", "warmup", "--m", "3", "--d", "2", "-o", q}).code == 0);
    CHECK(read_text(q) == read_text(a));
  }
}

TEST_CASE("basis file drives refine") {
  TempDir t;
  auto s = t / "s.cc", b = t / "b.json", q = t / "q.cc";
  write_complex(s, torus_complex(2));
  REQUIRE(run({"basis", s, "-o", b}).code == 0);
  CHECK(run({"basis", s, "-o", b}).out.rfind("genus=1 curves=2", 0) == 0);
  auto r = run({"refine", s, b, "-o", q});
  CHECK(r.code == 0);
  auto qp = read_complex(q);
  CHECK(validate(qp).is_closed_pseudomanifold);
  CHECK(r.out == qp.fvector().csv() + "\n");

  CHECK(read_text(b).find("\"beta_1\"") != std::string::npos);

  // Genus 1 needs two curves.
  write_text(t / "bad.json", "{\"genus\": 1, \"curves\": []}");
  CHECK(run({"refine", s, t / "bad.json", "-o", q}).code == 1);
}

TEST_CASE("homology row") {
  TempDir t;
  auto s = t / "t.cc";
  write_complex(s, torus_complex(2));
  auto r = run({"homology", s, "--coeff", "z"});
  CHECK(r.code == 0);
  CHECK(r.out == "2,16,32,16,1,2,1,none\n");
  CHECK(run({"homology", s, "--coeff", "2"}).out == r.out);
  CHECK(run({"homology", s, "--coeff", "q"}).out == r.out);
}

TEST_CASE("experiment rows") {
  auto r = run({"experiment", "warmup", "--values", "5,2,4,3", "--d", "2"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "kind,d,n_param,k,f0,f1,f2,wall_seconds,mode,residual,f0_per_n,f2_per_n2,c,check,status\n"
        "warmup,2,2,,50,100,56,-,full,0;0,25.000000,14.000000,,true,ok\n"
        "warmup,2,3,,110,258,171,-,full,0;0,36.666667,19.000000,,true,ok\n"
        "warmup,2,4,,194,520,416,-,full,0;0,48.500000,26.000000,,true,ok\n"
        "warmup,2,5,,302,910,875,-,full,0;0,60.400000,35.000000,,true,ok\n");

  auto s1 = run({"experiment", "surface", "--values", "31,61,101"});
  auto s3 = run({"--threads", "3", "experiment", "surface", "--values", "101,61,31"});
  CHECK(s1.code == 0);
  CHECK(s1.out == s3.out);
  CHECK(s1.out.find("false") == std::string::npos);

  auto bad = run({"experiment", "surface", "--values", "31,15"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("surface,2,15,") != std::string::npos);
  CHECK(bad.out.find("surface,2,31,") != std::string::npos);
}
