// Command-line front end: measure, ellipsoid, functional, transport, bl,
// stability and suite subcommands. Exit 0 ok, 2 verification failed, 1 usage
// or I/O error.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "simplexstab/brascamp_lieb.hpp"
#include "simplexstab/ellipsoids.hpp"
#include "simplexstab/gaussian_functionals.hpp"
#include "simplexstab/io.hpp"
#include "simplexstab/isotropic.hpp"
#include "simplexstab/parallel.hpp"
#include "simplexstab/stability.hpp"
#include "simplexstab/suite.hpp"
#include "simplexstab/transport.hpp"

using namespace simplexstab;
using io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

struct Options {
  std::string in;
  std::string out;
  std::string body;
  std::string family = "vertex-added";
  std::string eps_spec = "1e-4..1e-2:8";
  std::string method = "mc";
  int n = 2;
  int k = 6;
  int grid = 200;
  int sign = 1;
  std::uint64_t seed = 0;
  std::uint64_t samples = kDefaultSamples;
  double eps = kDefaultMveeEps;
  double tol = 1e-8;
  double s = 0.1;
  bool quick = false;
};

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// "a..b:m" gives m log-spaced values, otherwise a comma list.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const auto colon = spec.find(':', dots);
    if (colon == std::string::npos) throw CLI::ValidationError("--eps", "range needs ':count'");
    const double lo = std::stod(spec.substr(0, dots));
    const double hi = std::stod(spec.substr(dots + 2, colon - dots - 2));
    const int m = std::stoi(spec.substr(colon + 1));
    if (!(lo > 0 && hi > lo) || m < 2) throw CLI::ValidationError("--eps", "bad range " + spec);
    for (int i = 0; i < m; ++i)
      out.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (m - 1)));
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("--eps", "empty grid");
  return out;
}

Json with_meta(Json body, const Json& config, std::optional<std::uint64_t> seed) {
  body["tool_version"] = kToolVersion;
  body["config_echo"] = config;
  body["seed"] = seed ? Json(*seed) : Json(nullptr);
  return body;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    io::write_atomic(path, content);
}

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::absolute(path).parent_path();
  if (!std::filesystem::is_directory(parent))
    throw Error(ErrorCode::kIo, "output directory does not exist: " + parent.string());
}

Body named_or_file_body(const Options& o) {
  if (o.body == "simplex") return regular_simplex(o.n);
  if (o.body == "polar-simplex") return polar(regular_simplex(o.n)).with_vertices();
  if (o.body == "cube") return cube(o.n);
  if (o.body == "cross") return cross_polytope(o.n);
  if (o.body == "ball") return Ball{o.n, 1.0};
  return io::polytope_from_json(io::read_json(o.body));
}

int measure_generate(const Options& o) {
  const DiscreteMeasure mu = random_isotropic_measure(o.n, o.k, o.seed);
  emit(o.out, io::dump(with_meta(io::measure_to_json(mu), {{"command", "measure generate"}, {"n", o.n}, {"k", o.k}}, o.seed)));
  return kExitOk;
}

int measure_validate(const Options& o) {
  const DiscreteMeasure mu = io::measure_from_json(io::read_json(o.in));
  const MeasureReport r = validate(mu);
  Json j;
  j["isotropy_residual"] = r.isotropy_residual;
  j["centering_residual"] = r.centering_residual;
  j["mass_residual"] = r.mass_residual;
  j["passed"] = r.passes(o.tol);
  emit(o.out, io::dump(with_meta(j, {{"command", "measure validate"}, {"in", o.in}, {"tol", o.tol}}, std::nullopt)));
  return r.passes(o.tol) ? kExitOk : kExitVerification;
}

int measure_reduce(const Options& o) {
  const DiscreteMeasure mu = io::measure_from_json(io::read_json(o.in));
  const DiscreteMeasure reduced = reduce_support(mu, o.tol);
  emit(o.out, io::dump(with_meta(io::measure_to_json(reduced), {{"command", "measure reduce"}, {"in", o.in}, {"tol", o.tol}}, std::nullopt)));
  return kExitOk;
}

int ellipsoid_mvee(const Options& o) {
  const MveeResult r = mvee(io::point_columns_from_json(io::read_json(o.in)), o.eps);
  Json j = io::ellipsoid_to_json(r.ellipsoid);
  j["weights"] = Json::array();
  for (int i = 0; i < r.weights.size(); ++i) j["weights"].push_back(r.weights[i]);
  j["iterations"] = r.iterations;
  j["gap"] = r.gap;
  emit(o.out, io::dump(with_meta(j, {{"command", "ellipsoid mvee"}, {"in", o.in}, {"eps", o.eps}}, std::nullopt)));
  return kExitOk;
}

int ellipsoid_john(const Options& o) {
  const JohnDecomposition d = john_contact_measure(io::polytope_from_json(io::read_json(o.in)), o.eps);
  Json j;
  j["body"] = io::polytope_to_json(d.body);
  j["measure"] = io::measure_to_json(d.contacts);
  j["linear"] = Json::array();
  for (int r = 0; r < d.linear.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < d.linear.cols(); ++c) row.push_back(d.linear(r, c));
    j["linear"].push_back(row);
  }
  j["shift"] = Json::array();
  for (int i = 0; i < d.shift.size(); ++i) j["shift"].push_back(d.shift[i]);
  j["residuals"] = {{"isotropy", d.residuals.isotropy_residual},
                    {"centering", d.residuals.centering_residual},
                    {"mass", d.residuals.mass_residual}};
  emit(o.out, io::dump(with_meta(j, {{"command", "ellipsoid john"}, {"in", o.in}, {"eps", o.eps}}, std::nullopt)));
  return kExitOk;
}

int functional_ell(const Options& o) {
  const Body body = named_or_file_body(o);
  const FunctionalEstimate e = ell_norm(body, o.samples, RandomSource{o.seed, 0}, parse_method(o.method));
  Json j;
  j["value"] = e.value;
  j["stderr"] = e.std_error;
  j["method"] = method_name(e.method);
  j["samples"] = e.samples;
  emit(o.out, io::dump(with_meta(j, {{"command", "functional ell"}, {"body", o.body}, {"n", o.n}, {"samples", o.samples}, {"method", o.method}}, o.seed)));
  return kExitOk;
}

int transport_lemma(const Options& o) {
  const transport::Lemma61Report r = transport::verify_lemma61(o.grid);
  std::string csv = "quantity,relation,bound,extreme,margin,violations\n";
  for (const auto& c : r.checks) {
    csv += c.quantity + "," + c.relation + "," + number(c.bound) + "," + number(c.extreme) + "," +
           number(c.margin) + "," + std::to_string(c.violations) + "\n";
  }
  emit(o.out, csv);
  return r.passed() ? kExitOk : kExitVerification;
}

int bl_verify(const Options& o) {
  const DiscreteMeasure mu = io::measure_from_json(io::read_json(o.in));
  const BLInstance inst{lift(mu, o.sign), o.s};
  const RandomSource src{o.seed, 0};
  const double bound = bl_bound(inst);
  const FunctionalEstimate bl = bl_lhs(inst, o.samples, src);
  const RblEstimate rbl = rbl_lhs(inst, o.samples, src);
  const bool bl_ok = bl.value <= bound + 3 * bl.std_error;
  const bool rbl_ok = rbl.estimate.value >= bound - 3 * rbl.estimate.std_error;
  Json j;
  j["bound"] = bound;
  j["bl"] = {{"value", bl.value}, {"stderr", bl.std_error}, {"holds", bl_ok}};
  j["rbl"] = {{"value", rbl.estimate.value},
              {"stderr", rbl.estimate.std_error},
              {"infeasible", rbl.infeasible},
              {"kkt_failures", rbl.kkt_failures},
              {"max_kkt_residual", rbl.max_kkt_residual},
              {"holds", rbl_ok}};
  j["passed"] = bl_ok && rbl_ok;
  emit(o.out, io::dump(with_meta(j, {{"command", "bl verify"}, {"measure", o.in}, {"s", o.s}, {"sign", o.sign}, {"samples", o.samples}}, o.seed)));
  return bl_ok && rbl_ok ? kExitOk : kExitVerification;
}

int stability_run(const Options& o) {
  const ExtremalFamily family = make_family(parse_family(o.family), o.n, parse_grid(o.eps_spec));
  const ExperimentReport r = fit_exponent(family, o.samples, RandomSource{o.seed, 0});
  std::string csv = "eps_nominal,eps_measured,delta_H,delta_vol,bound_margin\n";
  for (const auto& row : r.rows) {
    csv += number(row.eps_nominal) + "," + number(row.eps_measured) + "," + number(row.delta_H) +
           "," + number(row.delta_vol) + "," + number(row.bound_margin()) + "\n";
  }
  emit(o.out, csv);
  std::cerr << family_name(r.kind) << " n=" << r.n << ": delta_vol slope " << number(r.fit_vol.slope)
            << " +- " << number(r.fit_vol.std_error) << ", delta_H slope " << number(r.fit_H.slope)
            << " +- " << number(r.fit_H.std_error) << "\n";
  return r.bounds_hold() ? kExitOk : kExitVerification;
}

int suite(const Options& o) {
  const std::vector<SuiteCheck> checks = run_suite({o.seed, o.quick});
  Json list = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.violations << "/" << c.trials
              << " violations)" << (c.detail.empty() ? "" : " " + c.detail) << "\n";
    list.push_back({{"name", c.name},
                    {"passed", c.passed},
                    {"trials", c.trials},
                    {"violations", c.violations},
                    {"worst_margin", c.worst_margin},
                    {"detail", c.detail}});
  }
  Json j;
  j["checks"] = list;
  j["passed"] = all;
  const std::string text = io::dump(with_meta(j, {{"command", "suite"}, {"quick", o.quick}}, o.seed));
  if (!o.out.empty()) io::write_atomic(o.out, text);
  return all ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks around simplex extremality and stability"};
  app.require_subcommand(1);
  Options o;
  int workers = 0;
  app.add_option("--workers", workers, "worker threads (default: SIMPLEXSTAB_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);

  std::function<int()> action;
  auto bind = [&](CLI::App* sub, std::function<int(const Options&)> fn) {
    sub->callback([&action, &o, fn] { action = [&o, fn] { return fn(o); }; });
  };
  auto seed_opt = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "random seed")->required(); };
  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output file (default stdout)"); };

  auto* measure = app.add_subcommand("measure", "isotropic measures")->require_subcommand(1);
  auto* gen = measure->add_subcommand("generate", "random centered isotropic measure");
  gen->add_option("--n", o.n)->check(CLI::Range(2, 10));
  gen->add_option("--k", o.k, "Gaussian points before normalization")->check(CLI::PositiveNumber);
  seed_opt(gen);
  out_opt(gen);
  bind(gen, measure_generate);
  auto* val = measure->add_subcommand("validate", "isotropy, centering and mass residuals");
  val->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  val->add_option("--tol", o.tol);
  out_opt(val);
  bind(val, measure_validate);
  auto* red = measure->add_subcommand("reduce", "support reduction to n(n+3)/2 atoms");
  red->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  red->add_option("--tol", o.tol);
  out_opt(red);
  bind(red, measure_reduce);

  auto* ell = app.add_subcommand("ellipsoid", "Loewner and John ellipsoids")->require_subcommand(1);
  auto* mv = ell->add_subcommand("mvee", "minimum-volume enclosing ellipsoid");
  mv->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  mv->add_option("--eps", o.eps);
  out_opt(mv);
  bind(mv, ellipsoid_mvee);
  auto* jo = ell->add_subcommand("john", "Loewner normalization and contact measure of a polytope");
  jo->add_option("--in", o.in)->required()->check(CLI::ExistingFile);
  jo->add_option("--eps", o.eps);
  out_opt(jo);
  bind(jo, ellipsoid_john);

  auto* fn = app.add_subcommand("functional", "Gaussian functionals")->require_subcommand(1);
  auto* fell = fn->add_subcommand("ell", "l-norm E||X||_K");
  fell->add_option("--body", o.body, "polytope JSON, or simplex|polar-simplex|cube|cross|ball")->required();
  fell->add_option("--n", o.n, "dimension of a named body");
  fell->add_option("--samples,--n-samples", o.samples)->check(CLI::PositiveNumber);
  fell->add_option("--method", o.method, "mc or layer");
  seed_opt(fell);
  out_opt(fell);
  bind(fell, functional_ell);

  auto* tr = app.add_subcommand("transport", "one-dimensional transport maps")->require_subcommand(1);
  auto* lem = tr->add_subcommand("verify-lemma61", "derivative bounds on the grid, CSV of margins");
  lem->add_option("--grid", o.grid)->check(CLI::Range(2, 5000));
  out_opt(lem);
  bind(lem, transport_lemma);

  auto* bl = app.add_subcommand("bl", "Brascamp-Lieb and reverse inequalities")->require_subcommand(1);
  auto* blv = bl->add_subcommand("verify", "both sides against the common bound");
  blv->add_option("--measure,--in", o.in)->required()->check(CLI::ExistingFile);
  blv->add_option("--s", o.s)->check(CLI::Range(0.0, 10.0));
  blv->add_option("--sign", o.sign)->check(CLI::IsMember({-1, 1}));
  blv->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
  seed_opt(blv);
  out_opt(blv);
  bind(blv, bl_verify);

  auto* st = app.add_subcommand("stability", "simplex stability experiments")->require_subcommand(1);
  auto* run = st->add_subcommand("run", "family sweep, CSV report");
  run->add_option("--family", o.family, "vertex-added|corner-cut|polar-vertex-added|stretched-vertex");
  run->add_option("--n", o.n)->check(CLI::Range(2, 4));
  run->add_option("--eps", o.eps_spec, "lo..hi:count or a comma list");
  run->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
  seed_opt(run);
  out_opt(run);
  bind(run, stability_run);

  auto* su = app.add_subcommand("suite", "property suite over all modules");
  su->add_flag("--quick", o.quick, "reduced sample counts");
  seed_opt(su);
  out_opt(su);
  bind(su, suite);

  // Global flags may follow the subcommand.
  for (auto* group : app.get_subcommands({})) {
    group->fallthrough();
    for (auto* sub : group->get_subcommands({})) sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (workers > 0) set_worker_count(workers);
    check_output_path(o.out);
    return action ? action() : kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
