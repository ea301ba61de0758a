#include "simplexstab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "simplexstab/brascamp_lieb.hpp"
#include "simplexstab/ellipsoids.hpp"
#include "simplexstab/gaussian_functionals.hpp"
#include "simplexstab/isotropic.hpp"
#include "simplexstab/polytope.hpp"
#include "simplexstab/stability.hpp"
#include "simplexstab/transport.hpp"

namespace simplexstab {
namespace {

// Tallies margins; a trial fails when its margin is negative.
struct Tally {
  SuiteCheck check;
  explicit Tally(std::string name) {
    check.name = std::move(name);
    check.worst_margin = INFINITY;
  }
  void add(double margin) {
    ++check.trials;
    if (!(margin >= 0)) ++check.violations;
    check.worst_margin = std::min(check.worst_margin, margin);
  }
  SuiteCheck done(std::string detail = {}) {
    check.passed = check.trials > 0 && check.violations == 0;
    check.detail = std::move(detail);
    return check;
  }
};

std::string format(const char* fmt, double a, double b = 0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

double log_uniform(double u, double lo, double hi) {
  return std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)));
}

Matrix random_rotation(const RandomSource& src, std::uint64_t index, int n) {
  Matrix g(n, n);
  src.normals(index, g.data(), n * n);
  return orthogonal_from_normals(n, g.data());
}

Vector tilt(const Vector& u, double angle, const RandomSource& src, std::uint64_t index) {
  Vector d = src.normal_vector(index, static_cast<int>(u.size()));
  d -= d.dot(u) * u;
  d.normalize();
  return std::cos(angle) * u + std::sin(angle) * d;
}

// Random polytope with (1/n) B^n inside and everything within n B^n.
Polytope sandwiched_polytope(int n, const RandomSource& src, std::uint64_t index) {
  const int m = 2 * n + 4;
  for (std::uint32_t attempt = 0;; ++attempt) {
    Matrix p(n, m);
    for (int j = 0; j < m; ++j) {
      const std::uint64_t id = index * 4096 + attempt * 64 + j;
      const double r = 0.6 + 0.8 * src.uniforms(id, 1)[0];
      p.col(j) = r * src.sphere_vector(id, n);
    }
    try {
      const Polytope k = Polytope::from_vertices(p).complete();
      if (k.halfspaces().offsets.minCoeff() >= 1.0 / n) return k;
    } catch (const Error&) {
    }
  }
}

SuiteCheck volumes_check() {
  Tally t("closed-form volumes");
  for (int n = 2; n <= 8; ++n) {
    const double formula = std::pow(1.0 + 1.0 / n, n / 2.0) * std::sqrt(n + 1.0) / std::tgamma(n + 1.0);
    const double det = simplex_volume_from_vertices(regular_simplex(n).vertices());
    t.add(1e-10 - std::abs(simplex_volume(n) - formula));
    t.add(1e-10 - std::abs(det - formula));
  }
  for (int n = 2; n <= 10; ++n) t.add(std::pow(n, n) * simplex_volume(n) - 1.0);
  return t.done();
}

SuiteCheck ell_oracle_check(const SuiteConfig& cfg) {
  Tally t("simplex ell oracles");
  const std::uint64_t samples = cfg.quick ? 100000 : 400000;
  for (int n = 2; n <= (cfg.quick ? 4 : 6); ++n) {
    const Body body = polar(regular_simplex(n));
    const FunctionalEstimate e = ell_norm(body, samples, RandomSource{cfg.seed, 0x100u + n});
    t.add(3 * e.std_error - std::abs(e.value - simplex_ell_oracle(n)));
    t.add(std::sqrt(n) - simplex_ell_oracle(n));
    t.add(std::pow(n, 1.5) - simplex_ell(n));
  }
  return t.done();
}

SuiteCheck transport_check(const SuiteConfig& cfg) {
  Tally t("transport bounds");
  const transport::Lemma61Report r = transport::verify_lemma61(cfg.quick ? 50 : 200);
  for (const auto& c : r.checks) t.add(c.violations == 0 ? c.margin : -1.0);
  return t.done();
}

SuiteCheck ball_barthe_suite(const SuiteConfig& cfg) {
  Tally t("ball-barthe");
  const int instances = cfg.quick ? 100 : 1000;
  const RandomSource src{cfg.seed, 0x200};
  for (int i = 0; i < instances; ++i) {
    const int n = 2 + i % 3;
    const int points = n + 1 + static_cast<int>(src.uniforms(i, 0)[0] * (2 * n * n - n));
    const DiscreteMeasure mu = random_isotropic_measure(n, points, cfg.seed * 7919 + i);
    Vector tv(mu.size());
    for (int j = 0; j < mu.size(); ++j) tv[j] = log_uniform(src.uniforms(i, 1 + j)[0], 1e-2, 1e2);
    const BallBartheResult r = ball_barthe_check(mu, tv);
    t.add(r.lhs - r.theta_star * r.rhs * (1 - 1e-9));
    t.add(r.theta_star - 1.0);
    const BallBartheResult eq = ball_barthe_check(mu, Vector::Constant(mu.size(), tv[0]));
    t.add(eq.theta_star == 1.0 ? 0.0 : -1.0);
  }
  return t.done();
}

SuiteCheck john_check(const SuiteConfig& cfg) {
  Tally t("john pipeline");
  for (int n = 2; n <= 3; ++n) {
    const JohnDecomposition d = john_contact_measure(regular_simplex(n));
    const Vector& w = d.contacts.weights();
    t.add(1e-6 - (w.array() - n / (n + 1.0)).abs().maxCoeff());
  }
  const int bodies = cfg.quick ? 10 : 100;
  const RandomSource src{cfg.seed, 0x300};
  for (int i = 0; i < bodies; ++i) {
    const int n = 2 + i % 2;
    const int m = n + 2 + i % 6;
    Matrix p(n, m);
    for (int j = 0; j < m; ++j) p.col(j) = src.normal_vector(static_cast<std::uint64_t>(i) * 64 + j, n);
    const JohnDecomposition d = john_contact_measure(Polytope::from_vertices(p));
    const MeasureReport r = validate(d.contacts);
    t.add(1e-6 - std::max({r.isotropy_residual, r.centering_residual, r.mass_residual}));
    t.add(n * (n + 3) / 2 + 1 - d.contacts.size());
  }
  return t.done();
}

SuiteCheck identity_check(const SuiteConfig& cfg) {
  Tally t("simplex integral identities");
  for (int n = 2; n <= 3; ++n) {
    const std::uint64_t samples = cfg.quick ? 200000 : 1000000;
    const double tol = n == 2 ? (cfg.quick ? 1e-2 : 5e-3) : 1e-2;
    for (auto variant : {IdentityVariant::kSimplex, IdentityVariant::kPolar}) {
      for (double s : {0.0, 0.1, 0.15}) {
        const IdentityCheck c =
            simplex_identity_check(n, s, variant, samples, RandomSource{cfg.seed, 0x400u + n});
        t.add(tol - std::abs(c.relative_gap));
      }
    }
  }
  return t.done();
}

SuiteCheck bl_check(const SuiteConfig& cfg) {
  Tally t("brascamp-lieb sides");
  const std::uint64_t samples = cfg.quick ? 20000 : 200000;
  const RandomSource src{cfg.seed, 0x500};
  for (int n = 2; n <= 3; ++n) {
    for (int sign : {1, -1}) {
      const BLInstance inst{lift(simplex_measure(n), sign), 0.1};
      const double bound = bl_bound(inst);
      const FunctionalEstimate bl = bl_lhs(inst, samples, src);
      const RblEstimate rbl = rbl_lhs(inst, samples, src);
      t.add(3 * bl.std_error + 1e-12 * bound - std::abs(bl.value - bound));
      t.add(3 * rbl.estimate.std_error + 1e-12 * bound - std::abs(rbl.estimate.value - bound));
    }
  }
  const int instances = cfg.quick ? 6 : 30;
  const double shifts[] = {0.0, 0.1, 0.15};
  for (int i = 0; i < instances; ++i) {
    const int n = 2 + i % 2;
    const DiscreteMeasure mu = random_isotropic_measure(n, n + 3 + i % 4, cfg.seed * 31 + i);
    const BLInstance inst{lift(mu, i % 4 < 2 ? 1 : -1), shifts[i % 3]};
    const double bound = bl_bound(inst);
    const RandomSource s = src.with_stream(0x510u + i);
    const FunctionalEstimate bl = bl_lhs(inst, samples, s);
    const RblEstimate rbl = rbl_lhs(inst, samples, s);
    t.add(bound + 3 * bl.std_error - bl.value);
    t.add(rbl.estimate.value + 3 * rbl.estimate.std_error - bound);
  }
  return t.done();
}

SuiteCheck extremality_suite(const SuiteConfig& cfg) {
  Tally t("extremality");
  const int measures = cfg.quick ? 5 : 50;
  const std::uint64_t samples = cfg.quick ? 20000 : 100000;
  for (int n = 2; n <= 3; ++n) {
    for (int i = 0; i < measures; ++i) {
      const DiscreteMeasure mu = random_isotropic_measure(n, n + 2 + i % 6, cfg.seed * 101 + i);
      const ExtremalityReport r =
          extremality_check(mu, samples, RandomSource{cfg.seed, 0x600u + n});
      t.add(r.lowner.value + 3 * r.lowner.std_error);
      t.add(r.john.value + 3 * r.john.std_error);
      t.add(r.margin_support);
    }
  }
  return t.done();
}

SuiteCheck stability_suite(const SuiteConfig& cfg) {
  Tally t("stability slope and bounds");
  std::vector<double> grid;
  for (int i = 0; i < 6; ++i) grid.push_back(std::pow(10.0, -4.0 + 0.4 * i));
  const ExtremalFamily family = make_family(FamilyKind::kVertexAdded, 2, grid);
  const ExperimentReport r =
      fit_exponent(family, cfg.quick ? 100000 : 400000, RandomSource{cfg.seed, 0x700});
  t.add(std::min(r.fit_vol.slope - 0.8, 1.2 - r.fit_vol.slope));
  for (const auto& row : r.rows) t.add(row.bound_margin());
  return t.done(format("delta_vol slope %.4f", r.fit_vol.slope));
}

SuiteCheck geometry_suite(const SuiteConfig& cfg) {
  Tally t("geometry properties");
  const int trials = cfg.quick ? 20 : 200;
  const RandomSource src{cfg.seed, 0x800};
  for (int i = 0; i < trials; ++i) {
    const int n = 2 + i % 2;
    const auto u = src.uniforms(i, 0);
    // Polar Hausdorff comparison in both directions.
    const Polytope k = sandwiched_polytope(n, src.with_stream(0x810), i);
    const Polytope c = sandwiched_polytope(n, src.with_stream(0x811), i);
    const double d = hausdorff_distance(k, c);
    const double dp = hausdorff_distance(polar(k).complete(), polar(c).complete());
    t.add(n * n * d + 1e-9 - dp);
    t.add(n * n * dp + 1e-9 - d);
    // Clipping a vertex region so (1 - eps) S is no longer inside.
    const Polytope s = regular_simplex(n);
    const double vs = simplex_volume(n);
    const double eps = 0.01 + 0.4 * u[1];
    const int j = static_cast<int>(u[2] * (n + 1));
    const Vector v = s.vertices().col(j);
    const Vector a = tilt(v, 0.3 * u[3], src.with_stream(0x812), i);
    const Halfspaces& h = s.halfspaces();
    Matrix normals(h.count() + 1, n);
    normals << h.normals, a.transpose();
    Vector offsets(h.count() + 1);
    offsets << h.offsets, (1 - eps) * a.dot(v);
    const double clipped = polytope_volume(Polytope::from_halfspaces(normals, offsets));
    const double lower_i = std::pow(n / (n + 1.0), n) * std::pow(eps, n) * vs;
    t.add((vs - clipped) - lower_i * (1 - 1e-9));
    // One extra vertex outside (1 + eps) S.
    const auto w = src.uniforms(i, 1);
    Vector q = Vector::Zero(n);
    double total = 0;
    for (int r = 0, idx = 0; r <= n; ++r) {
      if (r == j) continue;
      const double e = -std::log(w[idx++]);
      q += e * s.vertices().col(r);
      total += e;
    }
    q /= total;
    Matrix grown(n, n + 2);
    grown << s.vertices(), (1 + eps) * (1 + 1e-9) * q;
    const double added = polytope_volume(Polytope::from_vertices(grown)) - vs;
    t.add(added - eps / (n + 1) * vs * (1 - 1e-9));
    // Sandwich of perturbed contacts around a rotated regular simplex.
    const double eta = log_uniform(u[1], 1e-4, 0.9 / (2 * n));
    const Matrix ws = random_rotation(src.with_stream(0x813), i, n) * s.vertices();
    Matrix contacts(n, n + 1);
    for (int r = 0; r <= n; ++r)
      contacts.col(r) = tilt(ws.col(r), eta * src.uniforms(i, 2 + r)[0],
                             src.with_stream(0x814 + r), i);
    const SandwichReport sw = sandwich_check(contacts, ws, eta);
    t.add(sw.passed() ? std::min(-sw.inner_violation, -sw.outer_violation) : -1.0);
  }
  return t.done();
}

}  // namespace

std::vector<SuiteCheck> run_suite(const SuiteConfig& config) {
  std::vector<SuiteCheck> out;
  out.push_back(volumes_check());
  out.push_back(ell_oracle_check(config));
  out.push_back(transport_check(config));
  out.push_back(ball_barthe_suite(config));
  out.push_back(john_check(config));
  out.push_back(identity_check(config));
  out.push_back(bl_check(config));
  out.push_back(extremality_suite(config));
  out.push_back(stability_suite(config));
  out.push_back(geometry_suite(config));
  return out;
}

}  // namespace simplexstab
