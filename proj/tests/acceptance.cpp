// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cubesphere/basis.hpp"
#include "cubesphere/error.hpp"
#include "cubesphere/fillball.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/sphere_builder.hpp"
#include "cubesphere/surface_gen.hpp"
#include "cubesphere/transforms.hpp"

using namespace cubesphere;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failed sub-checks and free-form notes for one criterion.
struct Verdict {
  std::vector<std::string> failed;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
  return s;
}

std::string list(const std::vector<long long>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

bool report(int index, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.failed.push_back(std::string("exception: ") + e.what());
  }
  const bool ok = v.failed.empty();
  std::printf("criterion %d: %s  %s (%.1fs)", index, ok ? "PASS" : "FAIL", title.c_str(), seconds_since(t0));
  if (!ok) std::printf("  failed: %s", join(v.failed).c_str());
  if (!v.notes.empty()) std::printf("  notes: %s", join(v.notes).c_str());
  std::printf("\n");
  std::fflush(stdout);
  return ok;
}

long long ll(std::size_t x) { return static_cast<long long>(x); }

// Betti numbers of a closed orientable surface follow from its components and Euler characteristic.
std::vector<long long> surface_betti(const CubeComplex& c) {
  auto inv = surface_invariants(c);
  const long long b0 = ll(inv.components);
  return {b0, 2 * b0 - inv.euler, b0};
}

void warmup(Verdict& v) {
  for (long long m = 2; m <= 5; ++m) {
    const std::string tag = "m=" + std::to_string(m);
    auto t0 = Clock::now();
    auto w = warmup_complex(static_cast<int>(m), 2);
    auto f = w.fvector();
    v.expect(ll(f[0]) == 12 * m * m + 2, tag + " d=2 f0=" + std::to_string(f[0]));
    v.expect(ll(f[2]) == m * m * m * m + 10 * m * m, tag + " d=2 f2=" + std::to_string(f[2]));
    v.expect(validate(w).is_complex, tag + " d=2 validate");
    v.expect(h1_trivial(w), tag + " d=2 h1_trivial");
    v.expect(seconds_since(t0) < 10, tag + " d=2 runtime");

    t0 = Clock::now();
    auto w3 = warmup_complex(static_cast<int>(m), 3);
    auto f3 = w3.fvector();
    const long long stated = 4 * (12 * m * m + 2), doubled = 2 * (12 * m * m + 2);
    v.expect(ll(f3[0]) == stated,
             tag + " d=3 f0=" + std::to_string(f3[0]) + " vs stated " + std::to_string(stated));
    if (ll(f3[0]) == doubled) v.note(tag + " d=3 f0 equals 2(12m^2+2)");
    v.expect(ll(f3[3]) == m * m * m * m + 10 * m * m, tag + " d=3 facets=" + std::to_string(f3[3]));
    v.expect(validate(w3).is_complex, tag + " d=3 validate");
    v.expect(seconds_since(t0) < 10, tag + " d=3 runtime");
  }
}

void surfaces(Verdict& v) {
  auto t0 = Clock::now();
  double prev_ratio = 0;
  std::string ratios;
  for (int n = 11; n <= 101; n += 2) {
    if (!is_odd_prime(n)) continue;
    const std::string tag = "n=" + std::to_string(n);
    auto s = n_square_surface(n);
    const auto& q = s.complex;
    const int D = s.rotation.graph.d_max;
    auto rep = validate(q);
    auto inv = surface_invariants(q);
    v.expect(rep.is_complex && rep.is_closed_pseudomanifold && inv.closed, tag + " closed complex");
    v.expect(inv.orientable, tag + " orientable");
    for (const auto& c : s.rotation.cycles)
      if (c.even && c.vertices.size() != static_cast<std::size_t>(2 * n)) {
        v.expect(false, tag + " even cycle of length " + std::to_string(c.vertices.size()));
        break;
      }
    v.expect(s.properties.prop_i && s.properties.prop_ii && s.properties.prop_iii,
             tag + " properties " + s.properties.witness);
    v.expect(divisibility_table(n, D).ok, tag + " divisibility table");
    v.expect(q.count(2) >= static_cast<std::size_t>(n) * D, tag + " f2 >= n*d_max");

    const double ratio = double(q.n_vertices()) / n;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d:%.3f", n, ratio);
    ratios += (ratios.empty() ? "" : " ") + std::string(buf);
    if (n > 31) v.expect(ratio <= prev_ratio, tag + " f0/n rose to " + std::string(buf));
    if (n >= 31) prev_ratio = ratio;

    const long long stated = 1 - n + static_cast<long long>(n) * D;
    v.expect(inv.genus == stated,
             tag + " genus " + std::to_string(inv.genus) + " vs stated " + std::to_string(stated));
    if (n <= 31) {
      auto h = betti_numbers(q, Coefficients::integers());
      v.expect(h.betti.size() > 1 && h.betti[1] == 2LL * inv.genus, tag + " b1 by SNF");
    }
  }
  v.note("f0/n " + ratios);
  v.expect(seconds_since(t0) < 60, "runtime");
}

void bases(Verdict& v) {
  for (int n : {11, 31}) {
    const std::string tag = "n=" + std::to_string(n);
    auto q = n_square_surface(n).complex;
    auto b = canonical_basis(q);
    v.note(tag + " genus " + std::to_string(b.genus));
    v.expect(crossing_bound(b.curves).max <= 2, tag + " crossing bound");
    auto chk = verify_curve_basis(q, b);
    v.expect(chk.pattern, tag + " canonical pattern");
    v.expect(chk.unimodular, tag + " unimodular");

    auto r = refine_with_basis(q, b);
    for (const auto& ch : r.edge_chains)
      if (ch.size() < 2 || (ch.size() - 1) % 2 != 0) {
        v.expect(false, tag + " odd subdivision of a Q edge");
        break;
      }
    auto reg = regularize_neighborhoods(r);
    std::size_t bad = 0;
    for (const auto& c : reg.certs) bad += !c.ok;
    v.expect(bad == 0, tag + " " + std::to_string(bad) + " neighborhood certificates failed");
    v.expect(reg.certs.size() == b.curves.size(), tag + " one certificate per curve");
    auto chk2 = verify_basis(reg.complex, reg.basis);
    v.expect(chk2.ok(), tag + " regularized basis " + chk2.detail);

    auto b0 = surface_betti(q), b1 = surface_betti(r.complex), b2 = surface_betti(reg.complex);
    v.expect(b0 == b1 && b1 == b2, tag + " betti " + list(b0) + " " + list(b1) + " " + list(b2));
    v.expect(validate(r.complex).is_closed_pseudomanifold && validate(reg.complex).is_closed_pseudomanifold,
             tag + " refined surfaces closed");
    if (n == 11) {
      auto h = betti_numbers(reg.complex, Coefficients::integers());
      v.expect(h.betti == b0, tag + " betti by SNF");
    }
  }
}

// Spheres from the cube boundary by repeated 5-splits, plus pairs of 10-splits.
std::vector<CubeComplex> fill_corpus() {
  std::vector<CubeComplex> out;
  for (std::size_t seed = 0; out.size() < 20; ++seed) {
    auto c = cube_sphere(2);
    for (std::size_t step = 0; step <= seed % 4; ++step)
      c = apply_gadget(c, 2, (seed * 5 + step * 3) % c.count(2), Gadget::InsertSquare5);
    out.push_back(c);
  }
  for (std::size_t i = 1; i < 5; ++i) {
    auto c = apply_gadget(cube_sphere(2), 2, 0, Gadget::Square10);
    out.push_back(apply_gadget(c, 2, i, Gadget::Square10));
  }
  return out;
}

void fills(Verdict& v) {
  auto s = cube_sphere(2);
  auto one = fill_ball(s);
  v.expect(one.ball.count(3) == 1, "cube boundary gives " + std::to_string(one.ball.count(3)) + " cubes");
  v.expect(verify_filling(one, s).ok, "cube boundary certificate");

  auto rejects = [&](const CubeComplex& c, const std::string& what) {
    try {
      fill_ball(c);
      v.expect(false, what + " accepted");
    } catch (const PreconditionError&) {
    }
  };
  rejects(apply_gadget(s, 2, 0, Gadget::Square10), "odd square count");
  rejects(torus_complex(2), "torus");

  std::size_t filled = 0, failed = 0, unverified = 0;
  for (const auto& c : fill_corpus()) {
    try {
      auto cert = fill_ball(c, {2000, 16});
      if (verify_filling(cert, c).ok)
        ++filled;
      else
        ++unverified;
    } catch (const FillFailed&) {
      ++failed;
    }
  }
  v.expect(filled + failed + unverified >= 20, "corpus size");
  v.expect(unverified == 0, std::to_string(unverified) + " unverified certificates");
  v.note("corpus: " + std::to_string(filled) + " filled and verified, " + std::to_string(failed) +
         " FILL_FAILED");
}

void induction(Verdict& v) {
  auto t0 = Clock::now();
  auto s4 = induct_dimension(cube_sphere(3));
  v.expect(s4.n_vertices() == 64, "one step: " + std::to_string(s4.n_vertices()) + " vertices");
  v.expect(s4.count(4) >= 16, "one step: facets");
  auto h = betti_numbers(s4, Coefficients::integers());
  v.expect(h.betti == std::vector<long long>{1, 0, 0, 0, 1}, "one step: integral homology " + list(h.betti));
  for (const auto& t : h.torsion) v.expect(t.empty(), "one step: torsion");

  auto s5 = induct_dimension(s4);
  v.expect(s5.n_vertices() == 256, "two steps: " + std::to_string(s5.n_vertices()) + " vertices");
  const std::vector<long long> sphere5{1, 0, 0, 0, 0, 1};
  for (auto co : {Coefficients::rationals(), Coefficients::mod(2)}) {
    auto hb = betti_numbers(s5, co);
    v.expect(hb.betti == sphere5, "two steps over " + co.name() + ": " + list(hb.betti));
  }
  v.expect(seconds_since(t0) < 120, "runtime");
}

BuildOptions structural() {
  BuildOptions o;
  o.structural = true;
  return o;
}

bool structural_ok = false;

void pipeline_structural(Verdict& v) {
  auto q = n_square_surface(11).complex;
  std::vector<SphereResult> runs;
  for (long long k : {8, 27}) {
    const std::string tag = "k=" + std::to_string(k);
    auto r = sphere3(11, k, structural());  // throws on a parity or hypothesis violation
    const auto& c = r.census;
    std::size_t bad = 0;
    for (const auto& req : r.requests) bad += !req.hypotheses_ok;
    v.expect(bad == 0, tag + " " + std::to_string(bad) + " requests break the fill hypotheses");
    v.expect(c.cylinder_vertices == static_cast<std::size_t>(k + 1) * q.n_vertices(), tag + " cylinder vertices");
    v.expect(c.cylinder_cubes == static_cast<std::size_t>(k) * q.count(2), tag + " cylinder cubes");
    v.expect(c.predicted_vertices == c.measured_vertices,
             tag + " predicted " + std::to_string(c.predicted_vertices) + " measured " +
                 std::to_string(c.measured_vertices));
    v.expect(validate(r.skeleton).is_complex, tag + " skeleton validates");
    v.note(tag + " " + std::to_string(r.requests.size()) + " requests, " + std::to_string(c.measured_vertices) +
           " skeleton vertices");
    runs.push_back(std::move(r));
  }
  v.expect(runs[0].census.stages == runs[1].census.stages, "stage cell counts differ across k");
  structural_ok = v.failed.empty();
}

void pipeline_full(Verdict& v) {
  BuildOptions opt;  // fills enabled
  auto r = sphere3(11, 2, opt);
  if (!r.complex) {
    v.expect(false, "full level not reached: " + r.failure);
    v.note(std::string("criterion 6 stands in: ") + (structural_ok ? "PASS" : "FAIL"));
    v.note("no certificate was accepted without verification");
    return;
  }
  const auto& c = *r.complex;
  auto rep = validate(c);
  v.expect(rep.is_complex, "validate");
  v.expect(rep.is_closed_pseudomanifold, "pseudomanifold");
  v.expect(manifold_check(c, 3).ok, "manifold_check(3)");
  auto h = betti_numbers(c, Coefficients::integers(), {~std::size_t{0}});
  v.expect(h.betti == std::vector<long long>{1, 0, 0, 1}, "integral homology " + list(h.betti));
  const double f0 = double(c.n_vertices()), f3 = double(c.count(3));
  v.expect(f3 <= f0 * f0 / 24, "f3 <= f0^2/24");
  v.expect(f3 <= f0 * (f0 - 1) / 8, "f3 <= f0(f0-1)/8");
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "warm-up formulas", warmup);
  ok &= report(2, "surface generator over primes 11..101", surfaces);
  ok &= report(3, "basis and refinement at n=11,31", bases);
  bool fill_ok = report(4, "fill soundness", fills);
  ok &= fill_ok;
  ok &= report(5, "dimension induction from the 4-cube boundary", induction);
  ok &= report(6, "pipeline structural level at n=11, k=8,27", pipeline_structural);
  ok &= report(7, "pipeline full level at n=11, k=2", pipeline_full);
  ok &= report(8, "asymptotics stand-ins", [&](Verdict& v) {
    v.note("the n^(5/4) facet exponent and the O(n) fill bound are not reproducible at desk scale");
    v.note("they are replaced by the census identities (criterion 6) and certificate soundness (criterion 4)");
    v.expect(structural_ok, "criterion 6 failed");
    v.expect(fill_ok, "criterion 4 failed");
  });
  return ok ? 0 : 1;
}
