//
// capra: command-line front end for the l0 conjugacy library.
//
// Subcommands:
//   conj          closed-form conjugate of l0 at a dual point
//   subdiff check exact membership verdict with the condition ledger
//   region        2-d membership sweep to CSV / JSON / SVG
//   lower build   max-of-affine lower-bound model from primal samples
//   lower eval    evaluate a stored model
//   verify        randomized self-checks of the closed forms vs oracles
//
// Exit codes: 0 success, 1 usage error (bad flags, malformed vectors,
// dimension mismatch), 2 domain or budget error (p out of range, unsupported
// regime, lattice too large), 3 negative verdict (non-member / failed
// verification).
//
// CAPRA_THREADS overrides the sweep worker count; no other environment
// variable is consulted.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capra/bounds.hpp"
#include "capra/capra.hpp"
#include "capra/format.hpp"
#include "capra/io.hpp"
#include "capra/norms.hpp"
#include "capra/oracle.hpp"
#include "capra/subdiff.hpp"
#include "capra/version.hpp"

namespace {

using namespace capra;

// --p: unparseable text is a usage error (1); a parsed value below 1 is a
// domain error (2)
PExponent parse_p_flag(const std::string& s) {
  if (s == "inf") return PExponent::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("unparseable --p value '" + s + "'");
  }
  if (used != s.size())
    throw std::invalid_argument("unparseable --p value '" + s + "'");
  if (!(v >= 1.0))
    throw std::domain_error("--p must be >= 1 (or the literal inf)");
  return PExponent(v);
}

unsigned env_threads() {
  const char* e = std::getenv("CAPRA_THREADS");
  if (e == nullptr || *e == '\0') return 0;
  char* end = nullptr;
  const long v = std::strtol(e, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1) return 0;  // malformed: auto
  return static_cast<unsigned>(v);
}

Window parse_window(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--window expects LO:HI");
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--window expects LO:HI");
    }
    if (used != t.size())
      throw std::invalid_argument("--window expects LO:HI");
    return v;
  };
  return Window{num(s.substr(0, colon)), num(s.substr(colon + 1))};
}

std::string vec_label(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) s += ",";
    s += fmt_g12(v[i]);
  }
  return s;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::invalid_argument("cannot open output file '" + path + "'");
  out << content;
  if (!out)
    throw std::invalid_argument("failed writing output file '" + path + "'");
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_conj(const std::string& p_s, const std::string& y_s) {
  const PExponent p = parse_p_flag(p_s);
  const Vec y = parse_vec(y_s);
  std::cout << fmt_g12(capra_conjugate(y, p)) << "\n";
  return 0;
}

int cmd_subdiff_check(const std::string& p_s, const std::string& x_s,
                      const std::string& y_s, double tol) {
  const PExponent p = parse_p_flag(p_s);
  const Vec x = parse_vec(x_s);
  const Vec y = parse_vec(y_s);
  const SubdiffVerdict v = subdiff_member(x, y, p, tol);
  std::cout << (v.member ? "MEMBER" : "NOT_MEMBER") << "\n";
  std::cout << "  " << pad("condition", 18) << pad("ok", 4) << pad("lhs", 20)
            << "rhs\n";
  for (const auto& c : v.conditions)
    std::cout << "  " << pad(c.id, 18) << pad(c.satisfied ? "yes" : "no", 4)
              << pad(fmt_g12(c.lhs), 20) << fmt_g12(c.rhs) << "\n";
  return v.member ? 0 : 3;
}

int cmd_region(const std::string& p_s, const std::string& x_s,
               bool all_classes, const std::string& window_s, double step,
               std::size_t directions, const std::string& format,
               const std::string& out, double tol) {
  const PExponent p = parse_p_flag(p_s);
  const Window w = parse_window(window_s);
  if (all_classes && !x_s.empty())
    throw std::invalid_argument("--x and --all-classes are mutually exclusive");
  if (!all_classes && x_s.empty())
    throw std::invalid_argument("region needs --x VEC or --all-classes");

  RegionGrid grid;
  RegionHeader header{p, tol, ""};
  const unsigned threads = env_threads();
  if (all_classes) {
    grid = region_sweep_classes(p, w, step, directions, tol, threads);
    header.origin = "classes directions=" + std::to_string(directions);
  } else {
    const Vec x = parse_vec(x_s);
    if (x.dim() != 2)
      throw std::invalid_argument("region sweeps need a 2-dimensional --x");
    grid = region_sweep(x, p, w, step, tol, threads);
    header.origin = "x=" + vec_label(x);
  }

  std::string content;
  if (format == "csv")
    content = region_to_csv(grid, header);
  else if (format == "json")
    content = region_to_json(grid, header);
  else if (format == "svg")
    content = region_to_svg(grid, header);
  else
    throw std::invalid_argument("--format must be csv, json or svg");
  write_output(out, content);
  return 0;
}

std::vector<Vec> sphere_samples(std::size_t count, std::size_t dim,
                                std::uint64_t seed) {
  if (count < 1)
    throw std::invalid_argument("--sphere needs at least one sample");
  if (dim < 1) throw std::invalid_argument("--dim must be >= 1");
  std::vector<Vec> out;
  out.reserve(count);
  auto snap = [](double c) { return std::abs(c) < 1e-12 ? 0.0 : c; };
  if (dim == 1) {
    for (std::size_t k = 0; k < count; ++k)
      out.push_back(Vec{k % 2 == 0 ? 1.0 : -1.0});
    return out;
  }
  if (dim == 2) {
    // equally spaced angles starting on the positive axis, so sparse
    // directions are hit exactly
    const double pi = std::acos(-1.0);
    for (std::size_t k = 0; k < count; ++k) {
      const double th =
          2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back(Vec{snap(std::cos(th)), snap(std::sin(th))});
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (out.size() < count) {
    std::vector<double> v(dim);
    double s = 0.0;
    for (double& c : v) {
      c = gauss(rng);
      s += c * c;
    }
    const double n = std::sqrt(s);
    if (n < 1e-6) continue;
    for (double& c : v) c = snap(c / n);
    bool zero = true;
    for (double c : v) zero = zero && c == 0.0;
    if (zero) continue;
    out.push_back(Vec(std::move(v)));
  }
  return out;
}

int cmd_lower_build(const std::string& p_s, const std::string& samples_path,
                    std::size_t sphere, std::size_t dim, std::uint64_t seed,
                    const std::string& out) {
  const PExponent p = parse_p_flag(p_s);
  if (!samples_path.empty() && sphere > 0)
    throw std::invalid_argument("--samples and --sphere are mutually exclusive");
  std::vector<Vec> samples;
  if (!samples_path.empty()) {
    std::ifstream in(samples_path);
    if (!in)
      throw std::invalid_argument("cannot open samples file '" +
                                  samples_path + "'");
    samples = read_samples(in);
    if (samples.empty())
      throw std::invalid_argument("samples file '" + samples_path +
                                  "' holds no vectors");
  } else if (sphere > 0) {
    samples = sphere_samples(sphere, dim, seed);
  } else {
    throw std::invalid_argument("lower build needs --samples FILE or --sphere N");
  }
  const CapraAffineModel m = build_model(samples, p);
  write_output(out, model_to_text(m));
  return 0;
}

int cmd_lower_eval(const std::string& model_path, const std::string& x_s) {
  std::ifstream in(model_path);
  if (!in)
    throw std::invalid_argument("cannot open model file '" + model_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const CapraAffineModel m = model_from_text(buf.str());
  const Vec x = parse_vec(x_s);
  if (x.dim() != m.dim())
    throw std::invalid_argument("--x dimension does not match the model");
  std::cout << fmt_g12(eval_model(m, x)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

double uni(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec rand_box(std::mt19937_64& rng, std::size_t d, double r) {
  std::vector<double> v(d);
  for (double& c : v) c = uni(rng, -r, r);
  return Vec(std::move(v));
}

// mostly-sparse vectors: each entry zero with probability 1/3
Vec rand_sparse(std::mt19937_64& rng, std::size_t d) {
  std::vector<double> v(d);
  for (double& c : v)
    c = uni(rng, 0.0, 1.0) < 1.0 / 3.0 ? 0.0 : uni(rng, -3.0, 3.0);
  return Vec(std::move(v));
}

// a signed magnitude bounded away from zero, so witness scalings stay small
// and float comparisons stay far from knife edges
double safe_mag(std::mt19937_64& rng) {
  return (uni(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * uni(rng, 0.3, 3.0);
}

// an x inside the membership domain of the given regime
Vec rand_domain_x(std::mt19937_64& rng, std::size_t d, const PExponent& p) {
  std::vector<double> v(d, 0.0);
  if (uni(rng, 0.0, 1.0) < 0.1) return Vec(std::move(v));  // origin
  std::uniform_int_distribution<std::size_t> pick(0, d - 1);
  if (p.is_one()) {
    v[pick(rng)] = safe_mag(rng);
    return Vec(std::move(v));
  }
  if (p.is_infinite()) {
    const double lambda = uni(rng, 0.3, 3.0);
    bool any = false;
    for (double& c : v)
      if (uni(rng, 0.0, 1.0) < 0.6) {
        c = (uni(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * lambda;
        any = true;
      }
    if (!any) v[pick(rng)] = lambda;
    return Vec(std::move(v));
  }
  bool any = false;
  for (double& c : v)
    if (uni(rng, 0.0, 1.0) < 0.6) {
      c = safe_mag(rng);
      any = true;
    }
  if (!any) v[pick(rng)] = safe_mag(rng);
  return Vec(std::move(v));
}

struct SuiteResult {
  std::string name;
  std::size_t passed;
  std::size_t total;
};

int cmd_verify(const std::string& p_s, std::size_t dim, std::size_t trials,
               std::uint64_t seed, double step, double tol) {
  const PExponent p = parse_p_flag(p_s);
  if (dim < 1) throw std::invalid_argument("--dim must be >= 1");
  if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
  const PExponent q = p.conjugate();

  std::cout << "capra verify v" << kVersion << " p=" << fmt_p(p)
            << " dim=" << dim << " trials=" << trials << " seed=" << seed
            << " step=" << fmt_g12(step) << " tol=" << fmt_g12(tol) << "\n";

  std::vector<SuiteResult> results;
  auto suite = [&](const std::string& name, std::size_t total,
                   const std::function<bool(std::mt19937_64&)>& one) {
    std::mt19937_64 rng(seed * 1000003ull + results.size() + 1);
    std::size_t ok = 0;
    for (std::size_t t = 0; t < total; ++t)
      if (one(rng)) ++ok;
    results.push_back(SuiteResult{name, ok, total});
  };

  // duality inequality between the lp and lq norms
  suite("holder-inequality", trials, [&](std::mt19937_64& rng) {
    const Vec x = rand_box(rng, dim, 3.0);
    const Vec y = rand_box(rng, dim, 3.0);
    return leq_tol(std::abs(dot(x, y)), lp_norm(x, p) * lp_norm(y, q), tol);
  });

  // top-(k,q) closed form against subset enumeration (budget-capped)
  suite("top-norm-subsets", trials, [&](std::mt19937_64& rng) {
    const Vec y = rand_box(rng, dim, 3.0);
    std::uniform_int_distribution<int> kk(0, static_cast<int>(dim));
    const int k = kk(rng);
    return nearly_equal(top_norm(y, k, q),
                        coordinate_dual_norm_by_subsets(y, k, p), 1e-12);
  });

  // inequality systems vs the exact argmax realization
  suite("admissible-dual-vs-argmax", trials, [&](std::mt19937_64& rng) {
    const Vec y = rand_sparse(rng, dim);
    const std::vector<int> arg = admissible_dual_by_argmax(y, p);
    std::vector<int> sys;
    for (int l = 0; l <= static_cast<int>(dim); ++l)
      if (in_admissible_dual(y, l, p, tol)) sys.push_back(l);
    return sys == arg;
  });

  // the conjugate majorizes every coupling-affine evaluation, and the
  // biconjugate stays below l0
  suite("coupling-young", trials, [&](std::mt19937_64& rng) {
    const Vec x = rand_sparse(rng, dim);
    const Vec y = rand_sparse(rng, dim);
    const bool young = leq_tol(capra_coupling(x, y, p) - l0(x),
                               capra_conjugate(y, p), tol);
    const bool below = leq_tol(capra_biconjugate(x, p),
                               static_cast<double>(l0(x)), tol);
    return young && below;
  });

  // membership verdict vs the definitional value equality
  suite("verdict-vs-value", trials, [&](std::mt19937_64& rng) {
    Vec x = rand_sparse(rng, dim);
    Vec y = rand_sparse(rng, dim);
    if (uni(rng, 0.0, 1.0) < 0.15 && in_subdiff_domain(x, p, tol)) {
      x = rand_domain_x(rng, dim, p);
      y = subdiff_witness(x, p);
    }
    const bool verdict = subdiff_member(x, y, p, tol).member;
    const double conj = capra_conjugate(y, p);
    const bool value =
        nearly_equal(conj, capra_coupling(x, y, p) - l0(x), tol);
    return verdict == value;
  });

  // closed-form conjugate vs the grid supremum
  {
    const std::size_t ny = std::min<std::size_t>(trials, 20);
    const GridSpec grid{-1.0, 1.0, step, dim, kDefaultGridBudget};
    grid_total_points(grid);  // surface budget problems before sampling
    const double gap_tol =
        std::max(0.02, 2.0 * step * static_cast<double>(dim));
    suite("conjugate-vs-grid", ny, [&](std::mt19937_64& rng) {
      const Vec y = rand_box(rng, dim, 4.0);
      const double closed = capra_conjugate(y, p);
      const double sup = conjugate_by_sup(y, p, grid);
      return leq_tol(sup, closed, 1e-12) && closed - sup <= gap_tol;
    });
  }

  // witnesses are members and attain the definitional equality; outside the
  // domain the subdifferential rejects and stays empty
  suite("witness-validity", trials, [&](std::mt19937_64& rng) {
    if (p.is_one() && uni(rng, 0.0, 1.0) < 0.3 && dim >= 2) {
      // dense x: the p = 1 subdifferential must be empty
      std::vector<double> v(dim);
      for (double& c : v) c = safe_mag(rng);
      const Vec x(std::move(v));
      bool threw = false;
      try {
        subdiff_witness(x, p);
      } catch (const std::domain_error&) {
        threw = true;
      }
      return threw && !subdiff_member(x, rand_box(rng, dim, 3.0), p, tol).member;
    }
    const Vec x = rand_domain_x(rng, dim, p);
    const Vec y = subdiff_witness(x, p);
    if (!subdiff_member(x, y, p, tol).member) return false;
    return nearly_equal(capra_conjugate(y, p),
                        capra_coupling(x, y, p) - l0(x), tol);
  });

  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const SuiteResult& r = results[i];
    const bool ok = r.passed == r.total;
    all = all && ok;
    std::string line = "[" + std::to_string(i + 1) + "/" +
                       std::to_string(results.size()) + "] " + r.name + " ";
    while (line.size() < 44) line += '.';
    line += " " + std::to_string(r.passed) + "/" + std::to_string(r.total) +
            (ok ? " PASS" : " FAIL");
    std::cout << line << "\n";
  }
  std::cout << "RESULT: " << (all ? "PASS" : "FAIL") << " ("
            << results.size() << " suites)\n";
  return all ? 0 : 3;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugacy toolkit for the l0 support count under the "
               "ray-constant coupling"};
  app.require_subcommand(1);

  std::string p_s, x_s, y_s, window_s, format = "csv", out = "-";
  std::string samples_path, model_path;
  double tol = kDefaultTol, step = 0.05;
  std::size_t directions = 180, sphere = 0, dim = 0, trials = 1000;
  std::uint64_t seed = 0;
  bool all_classes = false;

  CLI::App* conj = app.add_subcommand("conj", "conjugate of l0 at a dual point");
  conj->add_option("--p", p_s, "norm exponent in [1, inf]")->required();
  conj->add_option("--y", y_s, "dual point, comma-separated")->required();

  CLI::App* subdiff = app.add_subcommand("subdiff", "subdifferential queries");
  subdiff->require_subcommand(1);
  CLI::App* check = subdiff->add_subcommand("check", "membership verdict with the condition ledger");
  check->add_option("--p", p_s, "norm exponent in [1, inf]")->required();
  check->add_option("--x", x_s, "primal point, comma-separated")->required();
  check->add_option("--y", y_s, "dual point, comma-separated")->required();
  check->add_option("--tol", tol, "relative comparison tolerance");

  CLI::App* region = app.add_subcommand("region", "2-d membership sweep");
  region->add_option("--p", p_s, "norm exponent in [1, inf]")->required();
  region->add_option("--x", x_s, "primal point (2-d), comma-separated");
  region->add_flag("--all-classes", all_classes,
                   "sweep the union over support classes instead of one x");
  region->add_option("--window", window_s, "LO:HI, both axes")->required();
  region->add_option("--step", step, "lattice step")->required();
  region->add_option("--directions", directions,
                     "sampled directions for the full-support class");
  region->add_option("--format", format, "csv, json or svg");
  region->add_option("--out", out, "output path, - for stdout");
  region->add_option("--tol", tol, "relative comparison tolerance");

  CLI::App* lower = app.add_subcommand("lower", "max-of-affine lower bounds");
  lower->require_subcommand(1);
  CLI::App* build = lower->add_subcommand("build", "build a model from primal samples");
  build->add_option("--p", p_s, "norm exponent, 1 < p < inf")->required();
  build->add_option("--samples", samples_path, "file with one vector per line");
  build->add_option("--sphere", sphere, "generate N unit-sphere samples instead");
  build->add_option("--dim", dim, "dimension for --sphere (default 2)");
  build->add_option("--seed", seed, "seed for --sphere in dimension >= 3");
  build->add_option("--out", out, "output path, - for stdout");
  CLI::App* eval = lower->add_subcommand("eval", "evaluate a stored model");
  eval->add_option("--model", model_path, "model file")->required();
  eval->add_option("--x", x_s, "primal point, comma-separated")->required();

  CLI::App* verify = app.add_subcommand("verify", "randomized self-checks");
  verify->add_option("--p", p_s, "norm exponent in [1, inf]")->required();
  verify->add_option("--dim", dim, "vector dimension");
  verify->add_option("--trials", trials, "trials per suite");
  verify->add_option("--seed", seed, "base RNG seed");
  verify->add_option("--step", step, "grid step for the conjugate oracle");
  verify->add_option("--tol", tol, "relative comparison tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (conj->parsed()) return guarded([&] { return cmd_conj(p_s, y_s); });
  if (check->parsed())
    return guarded([&] { return cmd_subdiff_check(p_s, x_s, y_s, tol); });
  if (region->parsed())
    return guarded([&] {
      return cmd_region(p_s, x_s, all_classes, window_s, step, directions,
                        format, out, tol);
    });
  if (build->parsed())
    return guarded([&] {
      return cmd_lower_build(p_s, samples_path, sphere,
                             dim == 0 ? 2 : dim, seed, out);
    });
  if (eval->parsed())
    return guarded([&] { return cmd_lower_eval(model_path, x_s); });
  if (verify->parsed())
    return guarded([&] {
      return cmd_verify(p_s, dim == 0 ? 3 : dim, trials, seed, step, tol);
    });
  return 1;
}
