// ptes: command-line driver over problem files. Reports go to stdout (or --json FILE), progress
// lines to stderr.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptes/errors.hpp"
#include "ptes/problem.hpp"
#include "ptes/report.hpp"

namespace {

struct Overrides {
  std::string problem;
  std::string json_out;
  std::optional<unsigned> precision, kmax, deg;
  std::optional<std::string> wcut;
  std::vector<std::int64_t> b;
  std::optional<std::uint64_t> cap;
  bool quiet = false;
};

void add_common(CLI::App* sub, Overrides& ov) {
  sub->add_option("problem", ov.problem, "problem file (JSON)")->required();
  sub->add_option("--precision", ov.precision, "p-adic precision M");
  sub->add_option("--wcut", ov.wcut, "basis weight cut, integer or p/q");
  sub->add_option("--kmax", ov.kmax, "largest k");
  sub->add_option("--deg", ov.deg, "hypergeometric total-degree cut");
  sub->add_option("--b", ov.b, "twists b coprime to lcm(d)");
  sub->add_option("--cap", ov.cap, "enumeration cap");
  sub->add_option("--json", ov.json_out, "write the report here instead of stdout");
  sub->add_flag("-q,--quiet", ov.quiet, "no progress lines");
}

void apply(ptes::ProblemSpec& s, const Overrides& ov) {
  if (ov.precision) s.precision = *ov.precision;
  if (ov.kmax) s.kmax = *ov.kmax;
  if (ov.deg) s.deg = *ov.deg;
  if (ov.cap) s.cap = *ov.cap;
  if (ov.wcut) {
    try {
      s.w_cut = ptes::Rational(*ov.wcut);
    } catch (const std::exception&) {
      throw ptes::SpecError("--wcut must be an integer or p/q");
    }
  }
  if (!ov.b.empty()) {
    for (auto b : ov.b) ptes::require_coprime(s.unfold_spec(), b);
    s.b = ov.b;
  }
  if (s.precision == 0) throw ptes::SpecError("precision must be positive");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial toric exponential sums, their L-functions and unit roots"};
  app.require_subcommand(1);
  Overrides ov;
  ptes::RunOptions opts;
  std::string tol;
  const char* names[] = {"unfold", "polytope-info", "sums", "lfunc", "trace-check", "fredholm", "unit-root", "degeneracy"};
  const char* help[] = {"unfolded polynomial, shift permutation, char polys, fixed-point counts",
                        "Newton polytope of G: vertices, facets, D, N!Vol, weight shells",
                        "brute-force S_k with trace histograms",
                        "L-function coefficients, rational reconstruction, Newton slopes",
                        "twisted trace formula, b-independence and commutation diagnostics",
                        "twisted Fredholm determinant and the delta_d factorization",
                        "unit root by hypergeometric series, power iteration or reconstruction",
                        "search for a degeneracy witness (semi-decision)"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    add_common(sub, ov);
    if (std::string(names[i]) == "trace-check") sub->add_flag("--wset", opts.wset, "also compare Teichmuller W-set sums");
    if (std::string(names[i]) == "unit-root") {
      sub->add_option("--method", opts.unit_root.method, "hypergeom | power-iter | rational")
          ->check(CLI::IsMember({"hypergeom", "power-iter", "rational"}));
      sub->add_flag("--cross-check", opts.unit_root.cross_check, "run every method and compare");
      sub->add_option("--step", opts.unit_root.step, "Deg increment of the stabilization run (default p)");
      sub->add_option("--tol", tol, "required p-adic agreement for --cross-check (default ceil(M/2))");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : ptes::kSpecError;
  }
  std::string sub = app.get_subcommands().front()->get_name();

  auto t0 = std::chrono::steady_clock::now();
  if (!ov.quiet)
    opts.log = [t0](const std::string& msg) {
      double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << nlohmann::json{{"t", std::round(t * 1000) / 1000}, {"msg", msg}}.dump() << '\n';
    };

  try {
    auto spec = ptes::load_problem(ov.problem);
    apply(spec, ov);
    if (!tol.empty()) opts.unit_root.tol = ptes::Rational(tol);
    auto rep = ptes::run(spec, sub, opts);
    rep.body["subcommand"] = sub;
    rep.body["status"] = rep.status == ptes::kPass ? "pass" : "identity-failure";
    std::string out = rep.body.dump(2) + "\n";
    if (ov.json_out.empty()) {
      std::cout << out;
    } else {
      std::ofstream f(ov.json_out);
      if (!f) throw ptes::SpecError("cannot write " + ov.json_out);
      f << out;
    }
    return rep.status;
  } catch (const ptes::CapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return ptes::kResourceCap;
  } catch (const ptes::PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << '\n';
    return ptes::kResourceCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return ptes::kSpecError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return ptes::kSpecError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
