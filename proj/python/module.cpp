// Python bindings for the unitfold core.  Thin wrappers only: argument
// marshalling happens here, all numerics stay in the C++ library.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unitfold/dists.hpp"
#include "unitfold/mle.hpp"
#include "unitfold/moments.hpp"
#include "unitfold/oracles.hpp"
#include "unitfold/specfun.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace unitfold;

namespace {

Family parse_family(const std::string& name) {
    if (name == "w" || name == "W") return Family::W;
    if (name == "z" || name == "Z") return Family::Z;
    throw std::invalid_argument("family must be 'w' or 'z'");
}

UnitDistSpec make_spec(const std::string& family, double a1, double a2, double l1,
                       double l2, double r) {
    return UnitDistSpec{parse_family(family), {a1, a2, l1, l2}, {r}};
}

ThetaVector make_theta(const std::vector<double>& t) {
    if (t.size() != 5)
        throw std::invalid_argument(
            "theta must have 5 entries (alpha1, alpha2, lambda1, lambda2, r)");
    return ThetaVector::from_array({t[0], t[1], t[2], t[3], t[4]});
}

py::dict fit_result_dict(const FitResult& fr) {
    py::dict d;
    d["alpha1"] = fr.theta.alpha1;
    d["alpha2"] = fr.theta.alpha2;
    d["lambda1"] = fr.theta.lambda1;
    d["lambda2"] = fr.theta.lambda2;
    d["r"] = fr.theta.r;
    d["loglik"] = fr.loglik;
    d["converged"] = fr.converged;
    d["iterations"] = fr.iterations;
    d["gradient_norm"] = fr.gradient_norm;
    d["best_start"] = fr.best_start;
    d["hessian_singular"] = fr.hessian_singular;
    d["profile"] =
        fr.profile == FitProfile::full ? std::string("full") : std::string("lambda1-fixed");
    if (fr.std_errors) {
        py::list se;
        for (double v : *fr.std_errors) se.append(v);
        d["std_errors"] = se;
    } else {
        d["std_errors"] = py::none();
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(unitfold, m) {
    m.doc() = "Unit-interval distributions from folded gamma ratios";

    m.def(
        "pdf",
        [](const std::string& family, double a1, double a2, double l1, double l2,
           double r, double u) { return pdf(make_spec(family, a1, a2, l1, l2, r), u); },
        py::arg("family"), py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"),
        py::arg("lambda2"), py::arg("r"), py::arg("u"),
        "Density of the named family at u in (0, 1).");

    m.def(
        "cdf",
        [](const std::string& family, double a1, double a2, double l1, double l2,
           double r, double u) { return cdf(make_spec(family, a1, a2, l1, l2, r), u); },
        py::arg("family"), py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"),
        py::arg("lambda2"), py::arg("r"), py::arg("u"),
        "Distribution function of the named family at u.");

    m.def(
        "quantile",
        [](const std::string& family, double a1, double a2, double l1, double l2,
           double r, double p) {
            return quantile(make_spec(family, a1, a2, l1, l2, r), p);
        },
        py::arg("family"), py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"),
        py::arg("lambda2"), py::arg("r"), py::arg("p"),
        "Quantile function (inverse cdf) at probability p.");

    m.def(
        "sample",
        [](const std::string& family, double a1, double a2, double l1, double l2,
           double r, std::size_t n, std::uint64_t seed) {
            const auto batch = sample(make_spec(family, a1, a2, l1, l2, r), n, seed);
            return py::array_t<double>(static_cast<py::ssize_t>(batch.values.size()),
                                       batch.values.data());
        },
        py::arg("family"), py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"),
        py::arg("lambda2"), py::arg("r"), py::arg("n"), py::arg("seed"),
        "Exact draws; deterministic for a given seed.");

    m.def(
        "moment_numeric",
        [](const std::string& family, double a1, double a2, double l1, double l2,
           double r, int order) {
            return moment_numeric(make_spec(family, a1, a2, l1, l2, r), order);
        },
        py::arg("family"), py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"),
        py::arg("lambda2"), py::arg("r"), py::arg("order"),
        "E(V^order) by adaptive quadrature.");

    m.def(
        "moment",
        [](const std::string& family, double a1, double a2, double l1, double l2,
           double r, int order, const std::string& method) {
            MomentRequest req;
            req.spec = make_spec(family, a1, a2, l1, l2, r);
            req.order = order;
            req.method = method == "closed"  ? MomentMethod::closed_form
                         : method == "quad"  ? MomentMethod::quadrature
                         : method == "auto"  ? MomentMethod::automatic
                                             : throw std::invalid_argument(
                                                   "method must be auto, closed, or quad");
            const auto res = moment(req);
            return py::make_tuple(
                res.value,
                res.used == MomentMethod::closed_form ? "closed" : "quad");
        },
        py::arg("family"), py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"),
        py::arg("lambda2"), py::arg("r"), py::arg("order") = 1,
        py::arg("method") = "auto",
        "Raw moment; returns (value, method_used).");

    m.def(
        "interval_prob",
        [](const std::string& family, double a1, double a2, double l1, double l2,
           double r, double a, double b) {
            return interval_prob(make_spec(family, a1, a2, l1, l2, r), a, b);
        },
        py::arg("family"), py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"),
        py::arg("lambda2"), py::arg("r"), py::arg("a"), py::arg("b"),
        "P(a < V <= b) via the preimage of the fold map.");

    m.def(
        "loglik",
        [](const std::string& family, const std::vector<double>& data,
           const std::vector<double>& theta) {
            return loglik(parse_family(family), data, make_theta(theta));
        },
        py::arg("family"), py::arg("data"), py::arg("theta"),
        "Sum of log densities of data under theta.");

    m.def(
        "score",
        [](const std::string& family, const std::vector<double>& data,
           const std::vector<double>& theta) {
            const auto s = score(parse_family(family), data, make_theta(theta));
            return std::vector<double>(s.begin(), s.end());
        },
        py::arg("family"), py::arg("data"), py::arg("theta"),
        "Gradient of loglik in theta, order (alpha1, alpha2, lambda1, lambda2, r).");

    m.def(
        "fit",
        [](const std::string& family, const std::vector<double>& data,
           const std::string& profile, int starts, std::uint64_t seed,
           bool std_errors) {
            FitOptions opts;
            opts.profile = profile == "full" ? FitProfile::full
                                             : FitProfile::lambda1_fixed;
            opts.starts = starts;
            opts.seed = seed;
            opts.compute_std_errors = std_errors;
            return fit_result_dict(fit(parse_family(family), data, opts));
        },
        py::arg("family"), py::arg("data"), py::arg("profile") = "lambda1-fixed",
        py::arg("starts") = 5, py::arg("seed") = 20240901ULL,
        py::arg("std_errors") = true,
        "Maximum likelihood fit; returns a dict of estimates and diagnostics.");

    m.def("mean_w_half",
          [](double a1, double a2, double l1, double l2) {
              return mean_w_half({a1, a2, l1, l2});
          },
          py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"), py::arg("lambda2"),
          "Closed-form W mean at r = 1/2; needs 1/3 < lambda2/lambda1 < 2.");

    m.def("mean_z_half",
          [](double a1, double a2, double l1, double l2) {
              return mean_z_half({a1, a2, l1, l2});
          },
          py::arg("alpha1"), py::arg("alpha2"), py::arg("lambda1"), py::arg("lambda2"),
          "Closed-form Z mean at r = 1/2; needs lambda2/lambda1 < 2.");

    m.def("xi", &xi, py::arg("p"), py::arg("alpha1"), py::arg("alpha2"),
          "Tail-integral building block of the equal-rate moment formulas.");

    m.def("hyp2f1",
          [](double a, double b, double c, double z) {
              return specfun::hyp2f1(a, b, c, z);
          },
          py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"),
          "Gauss hypergeometric function 2F1(a, b; c; z) for z < 1.");

    m.def("reg_inc_beta", &specfun::reg_inc_beta, py::arg("x"), py::arg("a"),
          py::arg("b"), "Regularized incomplete beta function I_x(a, b).");
}
