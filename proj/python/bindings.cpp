#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "simplexstab/brascamp_lieb.hpp"
#include "simplexstab/ellipsoids.hpp"
#include "simplexstab/gaussian_functionals.hpp"
#include "simplexstab/isotropic.hpp"
#include "simplexstab/parallel.hpp"
#include "simplexstab/polytope.hpp"
#include "simplexstab/stability.hpp"
#include "simplexstab/suite.hpp"
#include "simplexstab/transport.hpp"

namespace py = pybind11;
using namespace simplexstab;

namespace {

py::dict estimate_dict(const FunctionalEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["stderr"] = e.std_error;
  d["method"] = method_name(e.method);
  d["samples"] = e.samples;
  return d;
}

Body body_from(const py::object& body) {
  if (py::isinstance<Ball>(body)) return body.cast<Ball>();
  return body.cast<Polytope>();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Convex-geometry checks around simplex extremality and stability";
  m.attr("__version__") = kToolVersion;

  static py::exception<Error> error(m, "SimplexstabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("set_workers", &set_worker_count, py::arg("workers"));

  py::class_<Polytope>(m, "Polytope")
      .def_static("from_vertices", py::overload_cast<Matrix>(&Polytope::from_vertices),
                  py::arg("vertices"), "Vertices are the columns.")
      .def_static("from_halfspaces", &Polytope::from_halfspaces, py::arg("normals"), py::arg("offsets"))
      .def_property_readonly("dim", &Polytope::dim)
      .def_property_readonly("vertices", [](const Polytope& k) { return k.with_vertices().vertices(); })
      .def_property_readonly("normals", [](const Polytope& k) { return k.with_halfspaces().halfspaces().normals; })
      .def_property_readonly("offsets", [](const Polytope& k) { return k.with_halfspaces().halfspaces().offsets; })
      .def("complete", &Polytope::complete)
      .def("pruned", &Polytope::pruned)
      .def("scaled", &Polytope::scaled)
      .def("linear_image", &Polytope::linear_image)
      .def("contains_point", &Polytope::contains_point, py::arg("x"), py::arg("tol") = 1e-9)
      .def("volume", [](const Polytope& k) { return polytope_volume(k); })
      .def("polar", [](const Polytope& k) { return polar(k); })
      .def("gauge", [](const Polytope& k, const Vector& x) { return gauge_norm(k, x); })
      .def("support", [](const Polytope& k, const Vector& u) { return support_function(k, u); });

  py::class_<Ball>(m, "Ball")
      .def(py::init([](int dim, double radius) { return Ball{dim, radius}; }), py::arg("dim"),
           py::arg("radius") = 1.0)
      .def_readonly("dim", &Ball::dim)
      .def_readonly("radius", &Ball::radius);

  m.def("regular_simplex", &regular_simplex, py::arg("n"));
  m.def("cube", &cube, py::arg("n"));
  m.def("cross_polytope", &cross_polytope, py::arg("n"));
  m.def("simplex_volume", &simplex_volume, py::arg("n"));
  m.def("hausdorff_distance", &hausdorff_distance);
  m.def("symdiff_volume_exact", &symdiff_volume_exact);

  py::class_<DiscreteMeasure>(m, "DiscreteMeasure")
      .def(py::init<Matrix, Vector>(), py::arg("points"), py::arg("weights"))
      .def_property_readonly("dim", &DiscreteMeasure::dim)
      .def_property_readonly("size", &DiscreteMeasure::size)
      .def_property_readonly("points", &DiscreteMeasure::points)
      .def_property_readonly("weights", &DiscreteMeasure::weights)
      .def("moment", &DiscreteMeasure::moment)
      .def("barycenter", &DiscreteMeasure::barycenter);

  m.def("simplex_measure", &simplex_measure, py::arg("n"));
  m.def("cross_measure", &cross_measure, py::arg("n"));
  m.def("random_isotropic_measure", &random_isotropic_measure, py::arg("n"), py::arg("k"),
        py::arg("seed"));
  m.def("validate", [](const DiscreteMeasure& mu) {
    const MeasureReport r = validate(mu);
    py::dict d;
    d["isotropy_residual"] = r.isotropy_residual;
    d["centering_residual"] = r.centering_residual;
    d["mass_residual"] = r.mass_residual;
    return d;
  });
  m.def("reduce_support", &reduce_support, py::arg("mu"), py::arg("tol") = 1e-8);
  m.def("ball_barthe_check", [](const DiscreteMeasure& mu, const Vector& t) {
    const BallBartheResult r = ball_barthe_check(mu, t);
    py::dict d;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["theta_star"] = r.theta_star;
    d["theta_exact"] = r.theta_exact;
    return d;
  });

  m.def(
      "mvee",
      [](const Matrix& points, double eps) {
        const MveeResult r = mvee(points, eps);
        py::dict d;
        d["center"] = r.ellipsoid.center;
        d["shape"] = r.ellipsoid.shape;
        d["weights"] = r.weights;
        d["iterations"] = r.iterations;
        d["gap"] = r.gap;
        return d;
      },
      py::arg("points"), py::arg("eps") = kDefaultMveeEps);
  m.def(
      "john_contact_measure",
      [](const Polytope& k, double eps) {
        const JohnDecomposition j = john_contact_measure(k, eps);
        py::dict d;
        d["body"] = j.body;
        d["measure"] = j.contacts;
        d["linear"] = j.linear;
        d["shift"] = j.shift;
        return d;
      },
      py::arg("k"), py::arg("eps") = kDefaultMveeEps);

  m.def(
      "ell_norm",
      [](const py::object& body, std::uint64_t samples, std::uint64_t seed, const std::string& method) {
        return estimate_dict(ell_norm(body_from(body), samples, RandomSource{seed, 0}, parse_method(method)));
      },
      py::arg("body"), py::arg("samples") = kDefaultSamples, py::arg("seed") = 0,
      py::arg("method") = "mc");
  m.def(
      "mean_width",
      [](const py::object& body, std::uint64_t samples, std::uint64_t seed) {
        return estimate_dict(mean_width(body_from(body), samples, RandomSource{seed, 0}));
      },
      py::arg("body"), py::arg("samples") = kDefaultSamples, py::arg("seed") = 0);
  m.def("ell_ball", &ell_ball, py::arg("n"));
  m.def("simplex_ell", &simplex_ell, py::arg("n"));
  m.def("simplex_ell_oracle", &simplex_ell_oracle, py::arg("n"));

  m.def("phi", &transport::phi, py::arg("s"), py::arg("x"));
  m.def("psi", &transport::psi, py::arg("s"), py::arg("y"));
  m.def("tail_constants", [] {
    const transport::TailConstants t = transport::tail_constants();
    py::dict d;
    d["alpha"] = t.alpha;
    d["beta"] = t.beta;
    d["gamma"] = t.gamma;
    d["delta"] = t.delta;
    d["xi"] = t.xi;
    return d;
  });
  m.def(
      "verify_lemma61",
      [](int grid) {
        const transport::Lemma61Report r = transport::verify_lemma61(grid);
        py::list rows;
        for (const auto& c : r.checks) {
          py::dict d;
          d["quantity"] = c.quantity;
          d["relation"] = c.relation;
          d["bound"] = c.bound;
          d["extreme"] = c.extreme;
          d["margin"] = c.margin;
          d["violations"] = c.violations;
          rows.append(d);
        }
        return rows;
      },
      py::arg("grid") = 200);

  m.def(
      "bl_verify",
      [](const DiscreteMeasure& mu, double s, std::uint64_t samples, std::uint64_t seed, int sign) {
        const BLInstance inst{lift(mu, sign), s};
        const RandomSource src{seed, 0};
        const FunctionalEstimate bl = bl_lhs(inst, samples, src);
        const RblEstimate rbl = rbl_lhs(inst, samples, src);
        py::dict d;
        d["bound"] = bl_bound(inst);
        d["bl"] = estimate_dict(bl);
        d["rbl"] = estimate_dict(rbl.estimate);
        d["kkt_failures"] = rbl.kkt_failures;
        return d;
      },
      py::arg("mu"), py::arg("s") = 0.1, py::arg("samples") = kDefaultSamples, py::arg("seed") = 0,
      py::arg("sign") = 1);
  m.def(
      "simplex_identity_check",
      [](int n, double s, bool polar_variant, std::uint64_t samples, std::uint64_t seed) {
        const IdentityCheck c = simplex_identity_check(
            n, s, polar_variant ? IdentityVariant::kPolar : IdentityVariant::kSimplex, samples,
            RandomSource{seed, 0});
        py::dict d;
        d["lhs"] = c.lhs;
        d["rhs"] = c.rhs;
        d["relative_gap"] = c.relative_gap;
        d["relative_error"] = c.relative_error;
        return d;
      },
      py::arg("n"), py::arg("s"), py::arg("polar") = false, py::arg("samples") = 1000000,
      py::arg("seed") = 0);

  m.def(
      "stability_run",
      [](const std::string& family, int n, const std::vector<double>& eps, std::uint64_t samples,
         std::uint64_t seed) {
        const ExtremalFamily f = make_family(parse_family(family), n, eps);
        const ExperimentReport r = fit_exponent(f, samples, RandomSource{seed, 0});
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["eps_nominal"] = row.eps_nominal;
          d["eps_measured"] = row.eps_measured;
          d["delta_H"] = row.delta_H;
          d["delta_vol"] = row.delta_vol;
          d["bound_margin"] = row.bound_margin();
          rows.append(d);
        }
        py::dict d;
        d["rows"] = rows;
        d["slope_vol"] = r.fit_vol.slope;
        d["slope_H"] = r.fit_H.slope;
        d["bounds_hold"] = r.bounds_hold();
        return d;
      },
      py::arg("family"), py::arg("n"), py::arg("eps"), py::arg("samples") = 400000,
      py::arg("seed") = 0);
  m.def(
      "extremality_check",
      [](const DiscreteMeasure& mu, std::uint64_t samples, std::uint64_t seed) {
        const ExtremalityReport r = extremality_check(mu, samples, RandomSource{seed, 0});
        py::dict d;
        d["lowner_deficit"] = r.lowner.value;
        d["lowner_stderr"] = r.lowner.std_error;
        d["john_deficit"] = r.john.value;
        d["john_stderr"] = r.john.std_error;
        d["support_distance"] = r.support_distance;
        return d;
      },
      py::arg("mu"), py::arg("samples") = kDefaultSamples, py::arg("seed") = 0);

  m.def(
      "run_suite",
      [](std::uint64_t seed, bool quick) {
        py::list out;
        for (const auto& c : run_suite({seed, quick})) {
          py::dict d;
          d["name"] = c.name;
          d["passed"] = c.passed;
          d["trials"] = c.trials;
          d["violations"] = c.violations;
          d["worst_margin"] = c.worst_margin;
          out.append(d);
        }
        return out;
      },
      py::arg("seed"), py::arg("quick") = true);
}
