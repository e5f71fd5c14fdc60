// Python bindings for the main library operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mfsinr/charfn.hpp"
#include "mfsinr/inversion.hpp"
#include "mfsinr/montecarlo.hpp"
#include "mfsinr/rate.hpp"
#include "mfsinr/sinr_dist.hpp"

namespace py = pybind11;
using namespace mfsinr;

PYBIND11_MODULE(_mfsinr, m) {
    m.doc() = "Exact SINR distribution and ergodic rate under matched-filter precoding";

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init([](int L, int K, double p_t, double sigma2) {
                 SystemConfig cfg;
                 cfg.L = L;
                 cfg.K = K;
                 cfg.p_t = p_t;
                 cfg.sigma2 = sigma2;
                 cfg.validate();
                 return cfg;
             }),
             py::arg("L") = 2, py::arg("K") = 2, py::arg("p_t") = 1.0,
             py::arg("sigma2") = 1.0)
        .def_readwrite("L", &SystemConfig::L)
        .def_readwrite("K", &SystemConfig::K)
        .def_readwrite("p_t", &SystemConfig::p_t)
        .def_readwrite("sigma2", &SystemConfig::sigma2)
        .def("noise_ratio", &SystemConfig::noise_ratio,
             "K * sigma2 / p_t, the scale of the noise term")
        .def("__repr__", [](const SystemConfig& c) {
            return "SystemConfig(L=" + std::to_string(c.L) + ", K=" + std::to_string(c.K) +
                   ", p_t=" + std::to_string(c.p_t) + ", sigma2=" + std::to_string(c.sigma2) +
                   ")";
        });

    py::class_<QuadratureSpec>(m, "QuadratureSpec")
        .def(py::init([](double abs_tol, double rel_tol, int max_panels, double truncation_tol,
                         double t_min) {
                 QuadratureSpec q;
                 q.abs_tol = abs_tol;
                 q.rel_tol = rel_tol;
                 q.max_panels = max_panels;
                 q.truncation_tol = truncation_tol;
                 q.t_min = t_min;
                 q.validate();
                 return q;
             }),
             py::arg("abs_tol") = 1e-9, py::arg("rel_tol") = 1e-7,
             py::arg("max_panels") = 2000, py::arg("truncation_tol") = 1e-12,
             py::arg("t_min") = 1e-10)
        .def_readwrite("abs_tol", &QuadratureSpec::abs_tol)
        .def_readwrite("rel_tol", &QuadratureSpec::rel_tol)
        .def_readwrite("max_panels", &QuadratureSpec::max_panels)
        .def_readwrite("truncation_tol", &QuadratureSpec::truncation_tol)
        .def_readwrite("t_min", &QuadratureSpec::t_min);

    // Distribution evaluators.
    m.def(
        "sinr_cdf",
        [](double gamma, const SystemConfig& cfg, const QuadratureSpec& spec) {
            return sinr_cdf_exact_at(gamma, cfg, spec);
        },
        py::arg("gamma"), py::arg("cfg"), py::arg("spec") = QuadratureSpec{},
        "Exact SINR CDF at gamma (characteristic-function inversion).");
    m.def(
        "sinr_pdf",
        [](double gamma, const SystemConfig& cfg, const QuadratureSpec& spec) {
            return sinr_pdf_exact_at(gamma, cfg, spec);
        },
        py::arg("gamma"), py::arg("cfg"), py::arg("spec") = QuadratureSpec{},
        "Exact SINR PDF at gamma.");
    m.def("outage_probability", &outage_probability, py::arg("gamma_th"), py::arg("cfg"),
          py::arg("spec") = QuadratureSpec{},
          "P(SINR <= gamma_th), the exact CDF at the threshold.");
    m.def(
        "beta_approx_params",
        [](const SystemConfig& cfg) {
            const BetaApproxParams p = beta_approx_params(cfg);
            return py::make_tuple(p.alpha, p.beta);
        },
        py::arg("cfg"), "(alpha, beta) of the interference-sum Beta approximation.");
    m.def("sinr_cdf_beta_approx", &sinr_cdf_beta_approx_at, py::arg("gamma"), py::arg("cfg"),
          py::arg("spec") = QuadratureSpec{},
          "Beta-approximation SINR CDF at gamma (finite power).");
    m.def("sinr_cdf_high_snr_beta", &sinr_cdf_high_snr_beta_at, py::arg("gamma"),
          py::arg("cfg"), "High-power closed form of the Beta-approximation CDF.");
    m.def("scaled_inverse_sinr_cdf", &scaled_inverse_sinr_cdf_at, py::arg("x"), py::arg("cfg"),
          py::arg("spec") = QuadratureSpec{}, py::arg("high_snr_limit") = false,
          "CDF of 1/((K-1) SINR); with high_snr_limit, its infinite-power limit.");
    m.def("massive_limit_cdf", &massive_limit_cdf_at, py::arg("x"), py::arg("cfg"),
          "Large-antenna limit CDF of SINR / L.");
    m.def("nonconvergence_probability_bound", &nonconvergence_probability_bound,
          py::arg("eps"),
          "Upper bound exp(eps) - exp(-eps) on the limit-coupling failure probability.");

    // Ergodic-rate estimates.
    m.def("ergodic_rate_jensen", &ergodic_rate_jensen, py::arg("cfg"),
          "First-order (Jensen) ergodic-rate approximation.");
    m.def("ergodic_rate_robust", &ergodic_rate_robust, py::arg("cfg"),
          "Second-order ergodic-rate approximation; requires L > 2.");
    m.def("ergodic_rate_asymptotic", &ergodic_rate_asymptotic, py::arg("c"), py::arg("p_t"),
          py::arg("sigma2"), "Large-system rate limit at antennas-per-user ratio c.");
    m.def(
        "ergodic_rate_mc",
        [](const SystemConfig& cfg, std::uint64_t n_samples, std::uint64_t seed,
           unsigned shards) {
            mc::McSpec spec;
            spec.n_samples = n_samples;
            spec.seed = seed;
            spec.shards = shards;
            const RateEstimate est = ergodic_rate_mc(cfg, spec);
            return py::make_tuple(est.mean, est.std_error, est.n_samples);
        },
        py::arg("cfg"), py::arg("n_samples") = 1000000, py::arg("seed") = 1,
        py::arg("shards") = 0,
        "Monte Carlo ergodic rate: (mean, std_error, n_samples). Deterministic in "
        "(n_samples, seed); independent of shards.");

    // Monte Carlo sampling.
    m.def(
        "sample_sinr",
        [](const SystemConfig& cfg, std::uint64_t n_samples, std::uint64_t seed,
           unsigned shards) {
            mc::McSpec spec;
            spec.n_samples = n_samples;
            spec.seed = seed;
            spec.shards = shards;
            return mc::sample_sinr_direct(cfg, spec);
        },
        py::arg("cfg"), py::arg("n_samples") = 100000, py::arg("seed") = 1,
        py::arg("shards") = 0,
        "SINR samples from explicit channel draws. Deterministic in (n_samples, seed); "
        "independent of shards.");

    m.attr("__version__") = "1.0.0";
}
