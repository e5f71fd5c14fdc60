// Unit tests for the quadrature layer (Gauss-Kronrod panels, adaptive
// bisection, Wynn epsilon extrapolation) and the characteristic-function
// inversion routines, regression-tested against distributions with closed-form
// CDFs/PDFs: exponential, Gamma(n, 1), and an inverse-gamma reached through
// the noise-term CF.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "mfsinr/charfn.hpp"
#include "mfsinr/errors.hpp"
#include "mfsinr/inversion.hpp"
#include "mfsinr/quadrature.hpp"
#include "mfsinr/special.hpp"
#include "oracles/reference_values.hpp"

using mfsinr::cplx;
using mfsinr::QuadratureSpec;

namespace {

// CF of Gamma(n, 1): (1 - it)^{-n}.
mfsinr::CfHandle gamma_cf(int n) {
    return [n](double t) { return mfsinr::ipow(1.0 / cplx(1.0, -t), n); };
}

// CDF of Gamma(n, 1) via the regularized lower incomplete gamma.
double gamma_cdf(int n, double x) { return mfsinr::regularized_lower_gamma_int(n, x); }

const double kGammaQ005[8] = {refval::gamma1_q005, refval::gamma2_q005, refval::gamma3_q005,
                              refval::gamma4_q005, refval::gamma5_q005, refval::gamma6_q005,
                              refval::gamma7_q005, refval::gamma8_q005};
const double kGammaQ995[8] = {refval::gamma1_q995, refval::gamma2_q995, refval::gamma3_q995,
                              refval::gamma4_q995, refval::gamma5_q995, refval::gamma6_q995,
                              refval::gamma7_q995, refval::gamma8_q995};

}  // namespace

TEST_CASE("Gauss-Kronrod 15-point rule is exact for polynomials up to degree 22") {
    for (int deg = 0; deg <= 22; ++deg) {
        const auto r = mfsinr::quad::gk15(
            [deg](double x) { return std::pow(x, deg); }, -0.7, 1.3);
        const double exact =
            (std::pow(1.3, deg + 1) - std::pow(-0.7, deg + 1)) / (deg + 1);
        CHECK(std::abs(r.value - exact) < 1e-14 * std::max(1.0, std::abs(exact)));
    }
    // Degree 23 is the first the rule cannot integrate exactly.
    const auto r23 = mfsinr::quad::gk15([](double x) { return std::pow(x, 23); }, 0.0, 2.0);
    const double exact23 = std::pow(2.0, 24) / 24.0;
    CHECK(std::abs(r23.value - exact23) > 1e-10);
}

TEST_CASE("adaptive integration resolves a sharp peak and reports a sound error") {
    // 1000/(1 + (1000(x - 0.5))^2) integrates to atan(500) + atan(500).
    std::size_t used = 0;
    const auto r = mfsinr::quad::integrate_adaptive(
        [](double x) {
            const double u = 1000.0 * (x - 0.5);
            return 1000.0 / (1.0 + u * u);
        },
        0.0, 1.0, 1e-10, 40, used, 2000);
    const double exact = 2.0 * std::atan(500.0);
    CHECK(std::abs(r.value - exact) < 1e-9);
    CHECK(used > 1);
    CHECK(r.error < 1e-8);
}

TEST_CASE("adaptive integration respects its panel budget") {
    std::size_t used = 0;
    CHECK_THROWS_AS(mfsinr::quad::integrate_adaptive(
                        [](double x) {
                            const double u = 1000.0 * (x - 0.5);
                            return 1000.0 / (1.0 + u * u);
                        },
                        0.0, 1.0, 1e-12, 40, used, 3),
                    mfsinr::budget_error);
}

TEST_CASE("adaptive integration of an empty interval is zero") {
    std::size_t used = 0;
    const auto r = mfsinr::quad::integrate_adaptive([](double x) { return x; }, 2.0, 2.0, 1e-10,
                                                    10, used, 100);
    CHECK(r.value == 0.0);
}

TEST_CASE("Wynn epsilon accelerates geometric and alternating series") {
    // Partial sums of sum 0.7^k.
    std::vector<double> geo;
    double s = 0.0, term = 1.0;
    for (int k = 0; k < 12; ++k) {
        s += term;
        geo.push_back(s);
        term *= 0.7;
    }
    double err = 0.0;
    CHECK(std::abs(mfsinr::quad::wynn_epsilon_limit(geo, err) - 1.0 / 0.3) < 1e-9);

    // Partial sums of the alternating harmonic series -> ln 2. Plain summation
    // of 16 terms is off by ~0.03; the accelerated limit must do far better.
    std::vector<double> alt;
    s = 0.0;
    for (int k = 1; k <= 16; ++k) {
        s += ((k % 2) ? 1.0 : -1.0) / k;
        alt.push_back(s);
    }
    CHECK(std::abs(mfsinr::quad::wynn_epsilon_limit(alt, err) - std::log(2.0)) < 1e-8);

    std::vector<double> tiny{1.0, 2.0};
    CHECK_THROWS_AS(mfsinr::quad::wynn_epsilon_limit(tiny, err), std::domain_error);
}

TEST_CASE("Kahan summation keeps small terms") {
    mfsinr::quad::KahanSum acc;
    acc.add(1.0);
    for (int i = 0; i < 10; ++i) acc.add(1e-17);
    CHECK(acc.value() == doctest::Approx(1.0 + 1e-16).epsilon(1e-18));
}

TEST_CASE("CDF inversion recovers the exponential distribution") {
    const mfsinr::CfHandle cf = gamma_cf(1);
    for (double z : {0.5, 1.0, 3.0}) {
        const auto r = mfsinr::gil_pelaez_cdf(z, cf);
        CHECK(std::abs(r.value - (1.0 - std::exp(-z))) < 1e-7);
        CHECK(r.error_estimate >= 0.0);
    }
}

TEST_CASE("CDF inversion recovers Gamma(n,1) across its central 99% range") {
    for (int n = 1; n <= 8; ++n) {
        const mfsinr::CfHandle cf = gamma_cf(n);
        // Frozen 0.5% and 99.5% quantiles bracket the central range; check the
        // endpoints and three interior points.
        const double lo = kGammaQ005[n - 1];
        const double hi = kGammaQ995[n - 1];
        CHECK(std::abs(mfsinr::gil_pelaez_cdf(lo, cf).value - 0.005) < 1e-7);
        CHECK(std::abs(mfsinr::gil_pelaez_cdf(hi, cf).value - 0.995) < 1e-7);
        for (double frac : {0.25, 0.5, 0.75}) {
            const double z = lo + frac * (hi - lo);
            CHECK(std::abs(mfsinr::gil_pelaez_cdf(z, cf).value - gamma_cdf(n, z)) < 1e-7);
        }
    }
}

TEST_CASE("CDF inversion recovers an inverse-gamma law through the noise-term CF") {
    // Y = a/G with G ~ Gamma(L, 1) has F_Y(y) = Q(L, a/y).
    mfsinr::SystemConfig cfg;
    cfg.L = 8;
    cfg.K = 4;
    cfg.p_t = 10.0;  // noise ratio a = 0.4
    const double a = cfg.noise_ratio();
    const mfsinr::CfHandle cf = [&cfg](double t) { return mfsinr::cf_noise_term(t, cfg); };
    for (double y : {0.05, 0.1, 0.3}) {
        const auto r = mfsinr::gil_pelaez_cdf(y, cf);
        CHECK(std::abs(r.value - mfsinr::regularized_upper_gamma_int(cfg.L, a / y)) < 1e-7);
    }
}

TEST_CASE("PDF inversion recovers the Gamma(3,1) density") {
    const mfsinr::CfHandle cf = gamma_cf(3);
    for (double z : {1.0, 3.0}) {
        const double exact = 0.5 * z * z * std::exp(-z);
        CHECK(std::abs(mfsinr::fourier_pdf(z, cf).value - exact) < 1e-7);
    }
}

TEST_CASE("denominator CDF at the pinned point, with diagnostics") {
    mfsinr::SystemConfig cfg;
    cfg.L = 8;
    cfg.K = 4;
    cfg.p_t = 10.0;
    const mfsinr::CfHandle cf = [&cfg](double t) { return mfsinr::cf_denominator(t, cfg); };
    const auto r = mfsinr::gil_pelaez_cdf(1.0, cf);
    CHECK(std::abs(r.value - refval::denominator_cdf_at1_L8K4_a0p4) < 5e-10);
    CHECK(r.error_estimate > 0.0);
    CHECK(r.error_estimate < 1e-7);
}

TEST_CASE("deep left tail clamps to zero instead of going negative") {
    mfsinr::SystemConfig cfg;
    cfg.L = 8;
    cfg.K = 4;
    cfg.p_t = 10.0;
    const mfsinr::CfHandle cf = [&cfg](double t) { return mfsinr::cf_denominator(t, cfg); };
    // The denominator is >= noise + 0, and P(denominator <= 0.001) is
    // unfathomably small; the inversion integral lands within noise of zero.
    const auto r = mfsinr::gil_pelaez_cdf(0.001, cf);
    CHECK(r.value >= 0.0);
    CHECK(r.value < 1e-8);
}

TEST_CASE("panel budget exhaustion raises budget_error") {
    QuadratureSpec tight;
    tight.max_panels = 5;
    const mfsinr::CfHandle cf = gamma_cf(3);
    CHECK_THROWS_AS(mfsinr::gil_pelaez_cdf(1.0, cf, tight), mfsinr::budget_error);
}

TEST_CASE("quadrature spec validation") {
    QuadratureSpec ok;
    CHECK_NOTHROW(ok.validate());

    QuadratureSpec bad = ok;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ok;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ok;
    bad.max_panels = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ok;
    bad.panel_rule = "gk7";
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ok;
    bad.truncation_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = ok;
    bad.t_min = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("a coarse t_min still yields a usable exponential CDF") {
    QuadratureSpec coarse;
    coarse.t_min = 1e-3;
    const mfsinr::CfHandle cf = gamma_cf(1);
    const auto r = mfsinr::gil_pelaez_cdf(1.0, cf, coarse);
    CHECK(std::abs(r.value - (1.0 - std::exp(-1.0))) < 1e-6);
    CHECK(r.error_estimate > 0.0);
}
