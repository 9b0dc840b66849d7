#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubesphere/basis.hpp"
#include "cubesphere/error.hpp"
#include "cubesphere/fillball.hpp"
#include "cubesphere/homology.hpp"
#include "cubesphere/io.hpp"
#include "cubesphere/sphere_builder.hpp"
#include "cubesphere/surface.hpp"
#include "cubesphere/surface_gen.hpp"
#include "cubesphere/transforms.hpp"

namespace cubesphere::cli {
namespace {

using json = nlohmann::ordered_json;

struct Global {
  unsigned seed = 0;  // reserved, every path is deterministic
  unsigned threads = 1;
  std::string format = "cc";
};

// ---------- complex files ----------

json complex_json(const CubeComplex& c) {
  json cells = json::array();
  for (auto [k, i] : c.maximal_cells()) {
    json cell = json::array({k});
    if (k == 0) {
      cell.push_back(i);
    } else {
      for (VertexId v : c.cell(k, i)) cell.push_back(v);
    }
    cells.push_back(std::move(cell));
  }
  return json{{"format", "cubecomplex"}, {"dim", c.dim()}, {"n_vertices", c.n_vertices()}, {"cells", cells}};
}

CubeComplex complex_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != "cubecomplex")
    throw PreconditionError("json file is not a cubecomplex");
  std::string text = "cubecomplex " + std::to_string(j.at("dim").get<int>()) + " " +
                     std::to_string(j.at("n_vertices").get<std::size_t>()) + "\n";
  for (const auto& cell : j.at("cells")) {
    text += "cube";
    for (const auto& x : cell) text += " " + std::to_string(x.get<long long>());
    text += '\n';
  }
  return parse_complex(text);
}

bool looks_like_json(const std::string& text) {
  auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(what + ": " + e.what());
  }
}

CubeComplex load(const std::string& path) {
  std::string text = read_text(path);
  if (looks_like_json(text)) return complex_from_json(parse_json(text, path));
  return parse_complex(text);
}

void store(const Global& g, const std::string& path, const CubeComplex& c) {
  if (g.format == "json")
    write_text(path, complex_json(c).dump(1) + "\n");
  else
    write_complex(path, c);
}

json fvector_json(const FVector& f) { return json(f.f); }

// ---------- reports ----------

json census_json(const PipelineCensus& c) {
  json stages = json::array();
  for (const auto& s : c.stages)
    stages.push_back({{"stage", s.stage},
                      {"vertices", s.vertices},
                      {"squares", s.squares},
                      {"cubes", s.cubes},
                      {"fill_cubes", s.fill_cubes},
                      {"fill_vertices", s.fill_vertices},
                      {"requests", s.requests},
                      {"request_squares", s.request_squares}});
  return {{"n", c.n},
          {"k", c.k},
          {"d", c.d},
          {"q", fvector_json(c.q)},
          {"cylinder_vertices", c.cylinder_vertices},
          {"cylinder_cubes", c.cylinder_cubes},
          {"stages", stages},
          {"predicted_vertices", c.predicted_vertices},
          {"measured_vertices", c.measured_vertices},
          {"total_vertices", c.total_vertices},
          {"facets", c.facets},
          {"vertex_constant", c.vertex_constant},
          {"ten_applied", c.ten_applied},
          {"full", c.full}};
}

json surface_report(const SquareSurface& s) {
  auto inv = surface_invariants(s.complex);
  const auto& p = s.properties;
  return {{"n", s.rotation.graph.n},
          {"d_max", s.rotation.graph.d_max},
          {"even", s.rotation.even_count()},
          {"odd", s.rotation.odd_count()},
          {"genus", inv.genus},
          {"f", fvector_json(s.complex.fvector())},
          {"properties",
           {{"i", p.prop_i}, {"ii", p.prop_ii}, {"iii", p.prop_iii}, {"windows_checked", p.windows_checked},
            {"witness", p.witness}}},
          {"c", s.split.c},
          {"ten_applied", s.ten_applied}};
}

// ---------- basis files ----------

std::string curve_name(std::size_t i) {
  return std::string(i % 2 == 0 ? "alpha_" : "beta_") + std::to_string(i / 2 + 1);
}

json basis_json(const CurveBasis& b, const Refinement& r) {
  json curves = json::array();
  for (std::size_t i = 0; i < b.curves.size(); ++i) {
    json xs = json::array();
    for (const auto& x : b.curves[i].crossings)
      xs.push_back({x.edge, x.near == kNone ? -1LL : static_cast<long long>(x.near), x.depth});
    curves.push_back({{"name", curve_name(i)},
                      {"crossings", xs},
                      {"squares", b.curves[i].squares},
                      {"path", r.basis.curves[i]}});
  }
  return {{"genus", b.genus}, {"intersections", b.intersections}, {"curves", curves}};
}

CurveBasis basis_from_json(const json& j) {
  CurveBasis b;
  try {
    b.genus = j.at("genus").get<std::size_t>();
    for (const auto& c : j.at("curves")) {
      SurfaceCurve sc;
      for (const auto& x : c.at("crossings")) {
        long long near = x.at(1).get<long long>();
        sc.crossings.push_back({x.at(0).get<std::uint32_t>(), near < 0 ? kNone : static_cast<VertexId>(near),
                                x.at(2).get<std::uint32_t>()});
      }
      sc.squares = c.at("squares").get<std::vector<std::uint32_t>>();
      if (sc.squares.size() != sc.crossings.size())
        throw PreconditionError("curve " + c.value("name", std::string("?")) + ": squares and crossings differ in length");
      b.curves.push_back(std::move(sc));
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("basis file: ") + e.what());
  }
  if (b.curves.size() != 2 * b.genus) throw PreconditionError("basis file: expected 2*genus curves");
  return b;
}

// ---------- experiment ----------

struct Row {
  std::string kind;
  int d = 0;
  long long n_param = 0;
  std::string k;
  FVector f;
  double wall = 0;
  std::string mode = "full";
  std::string residual;
  std::string f0_per_n, f2_per_n2, c;
  bool check = false;
  std::string status = "ok";
  StageCensus hb_a, hb_b;  // sphere rows, compared across k
};

Row make_row(const std::string& kind, int d, long long n, const std::string& k) {
  Row r;
  r.kind = kind;
  r.d = d;
  r.n_param = n;
  r.k = k;
  return r;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<long long> parse_list(const std::string& s, const char* flag) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw CLI::ValidationError(flag, "not an integer list: " + s);
    out.push_back(v);
  }
  return out;
}

void run_parallel(std::vector<std::function<void()>>& jobs, unsigned threads) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) jobs[i]();
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, threads); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

template <class F>
void timed(Row& row, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    f();
  } catch (const std::exception& e) {
    row.status = "error: " + sanitize(e.what());
    row.check = false;
  }
  row.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

CubeComplex load_complex_file(const std::string& path) { return load(path); }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cubical complexes with many facets: generators and checks", "cubesphere"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Reserved; every construction is deterministic");
  app.add_option("--threads", g.threads, "Worker threads for experiment rows")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output file format")->check(CLI::IsMember({"cc", "json"}));

  std::function<int()> action;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a complex")->require_subcommand(1);

  int wm = 2, wd = 2;
  std::string wvariant = "fan", wout;
  auto* warm = gen->add_subcommand("warmup", "Simply connected d-complex with quadratically many facets");
  warm->add_option("--m", wm)->required()->check(CLI::PositiveNumber);
  warm->add_option("--d", wd)->required()->check(CLI::Range(2, 12));
  warm->add_option("--variant", wvariant)->check(CLI::IsMember({"fan", "literal"}));
  warm->add_option("-o,--output", wout)->required();
  warm->callback([&] {
    action = [&] {
      auto c = warmup_complex(wm, wd, wvariant == "fan" ? WarmupVariant::Fan : WarmupVariant::Literal);
      store(g, wout, c);
      out << c.fvector().csv() << "\n";
      return kExitOk;
    };
  });

  int sn = 0;
  std::string sout, sreport;
  auto* surf = gen->add_subcommand("surface", "Square surface with n*d_max squares on 2n vertices");
  surf->add_option("--n", sn)->required();
  surf->add_option("-o,--output", sout)->required();
  surf->add_option("--report", sreport, "Print a report to stdout")->check(CLI::IsMember({"json"}));
  surf->callback([&] {
    action = [&] {
      auto s = n_square_surface(sn);
      store(g, sout, s.complex);
      if (!sreport.empty()) out << surface_report(s).dump(1) << "\n";
      return kExitOk;
    };
  });

  int pd = 3, pn = 0;
  long long pk = 0;
  bool pstruct = false;
  std::string pout, pcensus;
  auto* sph = gen->add_subcommand("sphere", "Cubulated d-sphere; for d > 3 --n is a vertex budget");
  sph->add_option("--d", pd)->check(CLI::Range(3, 12));
  sph->add_option("--n", pn)->required()->check(CLI::PositiveNumber);
  sph->add_option("--k", pk, "Cylinder length, default n^3");
  sph->add_flag("--structural", pstruct, "Build the skeleton and fill requests only");
  sph->add_option("-o,--output", pout);
  sph->add_option("--census", pcensus);
  sph->callback([&] {
    action = [&]() -> int {
      BuildOptions opt;
      opt.structural = pstruct;
      json census;
      std::optional<CubeComplex> result;
      std::string failure;
      if (pd == 3) {
        auto r = sphere3(pn, pk, opt);
        census = census_json(r.census);
        census["requests"] = r.requests.size();
        census["failure"] = r.failure;
        if (r.complex)
          result = std::move(*r.complex);
        else if (pstruct)
          result = std::move(r.skeleton);
        failure = r.failure;
      } else {
        auto r = sphere_d(pd, static_cast<std::size_t>(pn), opt);
        census = census_json(r.census);
        census["d"] = pd;
        census["n_param"] = r.n_param;
        census["budget"] = r.budget;
        census["vertices"] = r.vertices;
        census["facets_d"] = r.facets;
        census["within_budget"] = r.within_budget;
        census["note"] = r.note;
        if (r.complex) result = std::move(*r.complex);
        if (!r.full && !pstruct) failure = r.note.empty() ? "fill failed" : r.note;
      }
      if (!pcensus.empty()) write_text(pcensus, census.dump(1) + "\n");
      if (result && !pout.empty()) store(g, pout, *result);
      if (!failure.empty() && !pstruct) {
        err << "FILL_FAILED: " << failure << "\n";
        return kExitFillFailed;
      }
      if (!result && !pout.empty()) err << "no complex written: structural mode keeps only the census for d > 3\n";
      out << census.dump() << "\n";
      return kExitOk;
    };
  });

  // product
  std::string pa, pb, prod_out;
  auto* prod = app.add_subcommand("product", "Cartesian product of two complexes");
  prod->add_option("a", pa)->required();
  prod->add_option("b", pb)->required();
  prod->add_option("-o,--output", prod_out)->required();
  prod->callback([&] {
    action = [&] {
      auto c = cartesian_product(load(pa), load(pb));
      store(g, prod_out, c);
      out << c.fvector().csv() << "\n";
      return kExitOk;
    };
  });

  // gadget
  std::string gname, gin, gout;
  std::size_t gcell = 0;
  auto* gad = app.add_subcommand("gadget", "Subdivide one maximal square or cube");
  gad->add_option("--name", gname)->required()->check(CLI::IsMember({"insert5", "inset7", "ten"}));
  gad->add_option("--cell", gcell, "Index among the cells of the gadget's dimension")->required();
  gad->add_option("file", gin)->required();
  gad->add_option("-o,--output", gout)->required();
  gad->callback([&] {
    action = [&] {
      auto gg = gadget_from_name(gname);
      auto c = apply_gadget(load(gin), gg == Gadget::InsetCube7 ? 3 : 2, gcell, gg);
      store(g, gout, c);
      out << c.fvector().csv() << "\n";
      return kExitOk;
    };
  });

  // verify
  std::string vin, vsphere;
  bool vmanifold = false;
  int vd = -1;
  auto* ver = app.add_subcommand("verify", "Validate a complex, or a filling certificate against its sphere");
  ver->add_option("file", vin)->required();
  ver->add_flag("--manifold", vmanifold, "Also run the pseudomanifold and vertex link checks");
  ver->add_option("--d", vd, "Dimension for the manifold check, default the top dimension");
  ver->add_option("--sphere", vsphere, "Treat file as a filling certificate of this sphere");
  ver->callback([&] {
    action = [&]() -> int {
      json rep;
      bool ok = true;
      if (!vsphere.empty()) {
        auto cert = parse_certificate(read_text(vin));
        auto chk = verify_filling(cert, load(vsphere));
        rep = {{"certificate", chk.ok}, {"witness", chk.witness}, {"cubes", cert.ball.count(3)}};
        ok = chk.ok;
      } else {
        auto c = load(vin);
        auto v = validate(c);
        json viol = json::array();
        for (const auto& x : v.violations)
          viol.push_back({{"cells", {x.dim_a, x.cell_a, x.dim_b, x.cell_b}}, {"reason", x.reason}});
        auto bounds = upper_bound_checks(c);
        rep = {{"is_complex", v.is_complex},
               {"closed_pseudomanifold", v.is_closed_pseudomanifold},
               {"f", fvector_json(c.fvector())},
               {"violations", viol},
               {"bounds", {{"diagonal", bounds.diagonal_ok}, {"quadratic", bounds.quadratic_ok},
                           {"quadratic_checked", bounds.quadratic_checked}}}};
        ok = v.is_complex && bounds.ok();
        if (vmanifold) {
          auto m = manifold_check(c, vd < 0 ? c.top_dim() : vd);
          rep["manifold"] = {{"ok", m.ok},
                             {"links_checked", m.links_checked},
                             {"bad_vertex", m.bad_vertex ? json(*m.bad_vertex) : json(nullptr)},
                             {"reason", m.reason}};
          ok = ok && m.ok;
        }
      }
      out << rep.dump() << "\n";
      return ok ? kExitOk : kExitFailure;
    };
  });

  // fvector
  std::string fin;
  auto* fv = app.add_subcommand("fvector", "Print dim,f0,...,fd");
  fv->add_option("file", fin)->required();
  fv->callback([&] {
    action = [&] {
      auto c = load(fin);
      out << c.top_dim() << "," << c.fvector().csv() << "\n";
      return kExitOk;
    };
  });

  // homology
  std::string hin, hcoeff = "z";
  std::size_t hlimit = HomologyOptions{}.snf_cell_limit;
  auto* hom = app.add_subcommand("homology", "Print dim,f0..fd,b0..bd,torsion");
  hom->add_option("file", hin)->required();
  hom->add_option("--coeff", hcoeff, "z, q or a prime p");
  hom->add_option("--snf-limit", hlimit, "Largest complex for integer coefficients");
  hom->callback([&] {
    action = [&] {
      Coefficients co;
      if (hcoeff == "z") {
        co = Coefficients::integers();
      } else if (hcoeff == "q") {
        co = Coefficients::rationals();
      } else {
        auto p = parse_list(hcoeff, "--coeff");
        if (p.size() != 1 || p[0] < 2 || p[0] > 65521 || (p[0] != 2 && !is_odd_prime(p[0])))
          throw CLI::ValidationError("--coeff", "expected z, q or a prime");
        co = Coefficients::mod(static_cast<std::uint32_t>(p[0]));
      }
      auto c = load(hin);
      auto h = betti_numbers(c, co, {hlimit});
      out << h.csv(c.fvector()) << "\n";
      return kExitOk;
    };
  });

  // basis
  std::string bin, bout;
  auto* bas = app.add_subcommand("basis", "Short canonical homology basis of a closed orientable surface");
  bas->add_option("file", bin)->required();
  bas->add_option("-o,--output", bout)->required();
  bas->callback([&] {
    action = [&] {
      auto q = load(bin);
      auto b = canonical_basis(q);
      auto r = refine_with_basis(q, b);
      write_text(bout, basis_json(b, r).dump(1) + "\n");
      auto len = r.basis.lengths();
      out << "genus=" << b.genus << " curves=" << b.curves.size()
          << " max_length=" << (len.empty() ? 0 : *std::max_element(len.begin(), len.end())) << "\n";
      return kExitOk;
    };
  });

  // refine
  std::string rin, rbasis, rout;
  auto* ref = app.add_subcommand("refine", "Refine a surface so the basis curves become edge paths");
  ref->add_option("surface", rin)->required();
  ref->add_option("basis", rbasis)->required();
  ref->add_option("-o,--output", rout)->required();
  ref->callback([&] {
    action = [&]() -> int {
      auto q = load(rin);
      auto b = basis_from_json(parse_json(read_text(rbasis), rbasis));
      b.intersections = curve_intersections(q, b.curves);
      auto chk = verify_curve_basis(q, b);
      if (!chk.ok()) {
        err << "basis rejected: " << chk.detail << "\n";
        return kExitFailure;
      }
      auto r = refine_with_basis(q, b);
      store(g, rout, r.complex);
      out << r.complex.fvector().csv() << "\n";
      return kExitOk;
    };
  });

  // fill
  std::string lin, lout;
  FillOptions lopt;
  auto* fil = app.add_subcommand("fill", "Fill a cubulated 2-sphere with a 3-ball");
  fil->add_option("file", lin)->required();
  fil->add_option("-o,--output", lout);
  fil->add_option("--max-steps", lopt.max_steps)->check(CLI::PositiveNumber);
  fil->add_option("--max-growth", lopt.max_growth);
  fil->callback([&] {
    action = [&] {
      auto cert = fill_ball(load(lin), lopt);
      if (!lout.empty()) write_text(lout, serialize_certificate(cert));
      out << "cubes=" << cert.ball.count(3) << " steps=" << cert.steps << "\n";
      return kExitOk;
    };
  });

  // experiment
  std::string ekind, elist, eks;
  int ed = 2;
  bool estruct = false, etiming = false;
  auto* exp = app.add_subcommand("experiment", "One CSV row per run, sorted by parameters");
  exp->add_option("kind", ekind)->required()->check(CLI::IsMember({"warmup", "surface", "sphere"}));
  exp->add_option("--values", elist, "m values (warmup) or primes n")->required();
  exp->add_option("--d", ed, "Dimension for warmup rows")->check(CLI::Range(2, 12));
  exp->add_option("--k", eks, "Cylinder lengths for sphere rows, default n^3");
  exp->add_flag("--structural", estruct);
  exp->add_flag("--timing", etiming, "Report wall time (otherwise the column is '-')");
  exp->callback([&] {
    action = [&]() -> int {
      auto values = parse_list(elist, "--values");
      auto ks = eks.empty() ? std::vector<long long>{0} : parse_list(eks, "--k");
      std::sort(values.begin(), values.end());
      std::sort(ks.begin(), ks.end());
      const int d = ekind == "warmup" ? ed : ekind == "surface" ? 2 : 3;
      std::vector<Row> rows;
      for (auto v : values) {
        if (ekind == "sphere") {
          for (auto k : ks) rows.push_back(make_row(ekind, d, v, std::to_string(k <= 0 ? v * v * v : k)));
        } else {
          rows.push_back(make_row(ekind, d, v, ""));
        }
      }
      std::vector<std::function<void()>> jobs;
      for (auto& row : rows) {
        jobs.push_back([&row, estruct, d] {
          timed(row, [&] {
            if (row.kind == "warmup") {
              auto c = warmup_complex(static_cast<int>(row.n_param), d);
              row.f = c.fvector();
              const long long m = row.n_param;
              const long long e0 = ipow(2, d - 2) * (12 * m * m + 2), ed_ = m * m * m * m + 10 * m * m;
              const long long r0 = static_cast<long long>(row.f[0]) - e0;
              const long long rd = static_cast<long long>(row.f[d]) - ed_;
              row.residual = std::to_string(r0) + ";" + std::to_string(rd);
              row.f0_per_n = fmt(double(row.f[0]) / m);
              row.f2_per_n2 = fmt(double(row.f[2]) / double(m * m));
              row.check = r0 == 0 && rd == 0 && validate(c).is_complex;
            } else if (row.kind == "surface") {
              auto s = n_square_surface(static_cast<int>(row.n_param));
              row.f = s.complex.fvector();
              const double n = double(row.n_param);
              row.residual = std::to_string(row.f.euler() - s.rotation.euler());
              row.f0_per_n = fmt(row.f[0] / n);
              row.f2_per_n2 = fmt(row.f[2] / (n * n));
              row.c = fmt(s.split.c);
              row.check = row.f[2] >= row.n_param * static_cast<std::size_t>(s.rotation.graph.d_max) &&
                          row.f.euler() == s.rotation.euler();
            } else {
              BuildOptions opt;
              opt.structural = estruct;
              auto r = sphere3(static_cast<int>(row.n_param), std::stoll(row.k), opt);
              row.mode = r.complex ? "full" : "structural";
              row.f = r.complex ? r.complex->fvector() : r.skeleton.fvector();
              row.residual = std::to_string(static_cast<long long>(r.census.predicted_vertices) -
                                            static_cast<long long>(r.census.measured_vertices));
              row.c = fmt(r.census.vertex_constant);
              for (const auto& s : r.census.stages) {
                if (s.stage.find("handlebody_a") == 0) row.hb_a = s;
                if (s.stage.find("handlebody_b") == 0) row.hb_b = s;
              }
              row.check = r.census.predicted_vertices == r.census.measured_vertices;
              if (!estruct && !r.complex) row.status = "FILL_FAILED: " + sanitize(r.failure);
            }
          });
        });
      }
      run_parallel(jobs, g.threads);
      // Handlebody cells do not depend on k.
      std::map<long long, const Row*> first;
      for (auto& row : rows) {
        if (row.kind != "sphere" || row.status != "ok") continue;
        auto [it, fresh] = first.emplace(row.n_param, &row);
        if (!fresh) row.check = row.check && row.hb_a == it->second->hb_a && row.hb_b == it->second->hb_b;
      }
      out << "kind,d,n_param,k";
      for (int i = 0; i <= d; ++i) out << ",f" << i;
      out << ",wall_seconds,mode,residual,f0_per_n,f2_per_n2,c,check,status\n";
      bool all_ok = true;
      for (const auto& row : rows) {
        out << row.kind << "," << row.d << "," << row.n_param << "," << row.k;
        for (int i = 0; i <= d; ++i) out << "," << row.f[i];
        out << "," << (etiming ? fmt(row.wall) : "-") << "," << row.mode << "," << row.residual << ","
            << row.f0_per_n << "," << row.f2_per_n2 << "," << row.c << "," << (row.check ? "true" : "false")
            << "," << row.status << "\n";
        all_ok = all_ok && row.check && row.status == "ok";
      }
      return all_ok ? kExitOk : kExitFailure;
    };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    const CLI::App* sub = &app;
    while (true) {
      auto subs = sub->get_subcommands();
      if (subs.empty()) break;
      sub = subs.front();
    }
    err << sub->help();
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const FillFailed& e) {
    err << e.what() << "\n";
    return kExitFillFailed;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace cubesphere::cli
