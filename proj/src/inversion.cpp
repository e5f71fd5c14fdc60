#include "mfsinr/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mfsinr/errors.hpp"
#include "mfsinr/quadrature.hpp"

namespace mfsinr {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0)) throw std::domain_error("QuadratureSpec: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw std::domain_error("QuadratureSpec: rel_tol must be > 0");
    if (max_panels < 1) throw std::domain_error("QuadratureSpec: max_panels must be >= 1");
    if (panel_rule != "gk15")
        throw std::domain_error("QuadratureSpec: unknown panel_rule '" + panel_rule + "'");
    if (!(truncation_tol > 0.0))
        throw std::domain_error("QuadratureSpec: truncation_tol must be > 0");
    if (!(t_min > 0.0) || !std::isfinite(t_min))
        throw std::domain_error("QuadratureSpec: t_min must be > 0 and finite");
}

namespace {

constexpr int kMaxDepth = 20;
constexpr int kConsecutiveSmall = 5;

struct OscillatoryIntegral {
    double value = 0.0;
    double error = 0.0;
};

// Shared engine for both inversion integrals. `integrand` is the real-valued
// frequency integrand, `envelope_scale(t)` the magnitude bound used by the
// truncation rule (|cf|/t for the CDF, |cf| for the PDF).
OscillatoryIntegral integrate_oscillatory(const std::function<double(double)>& integrand,
                                          const std::function<double(double)>& envelope_scale,
                                          double z, const QuadratureSpec& spec) {
    const double width = std::min(M_PI / std::max(std::abs(z), 1e-300), 1.0);
    const std::size_t budget = static_cast<std::size_t>(spec.max_panels);
    std::size_t used = 0;

    quad::KahanSum total;
    double err = 0.0;
    // Contribution of [0, t_min]: the integrand extends continuously to t=0,
    // so the sliver is bounded by |integrand(t_min)| * t_min.
    err += std::abs(integrand(spec.t_min)) * spec.t_min;

    const double panel_tol = std::max(spec.truncation_tol * 1e-3, spec.abs_tol / 64.0);
    const std::size_t phase_a_cap = std::min<std::size_t>(budget / 2, 384);

    double t = spec.t_min;
    int consecutive = 0;
    while (used < phase_a_cap) {
        const auto panel =
            quad::integrate_adaptive(integrand, t, t + width, panel_tol, kMaxDepth, used, budget);
        total.add(panel.value);
        err += panel.error;
        t += width;
        const double env = envelope_scale(t) * width;
        if (env < spec.truncation_tol) {
            if (++consecutive >= kConsecutiveSmall) {
                err += env;
                return {total.value(), err};
            }
        } else {
            consecutive = 0;
        }
    }

    // Phase B: half-period cycles summed and extrapolated. Without
    // oscillation (z ~ 0) there is nothing to accelerate; that is a genuine
    // budget failure.
    const double cycle = M_PI / std::abs(z);
    if (!std::isfinite(cycle) || cycle > 1e9)
        throw budget_error("inversion: envelope never fell below truncation_tol (no oscillation "
                           "to accelerate)");
    std::vector<double> partials;
    partials.reserve(128);
    partials.push_back(total.value());
    double accel_err = 0.0;
    consecutive = 0;
    while (used < budget) {
        const auto arch =
            quad::integrate_adaptive(integrand, t, t + cycle, panel_tol, kMaxDepth, used, budget);
        total.add(arch.value);
        err += arch.error;
        t += cycle;
        partials.push_back(total.value());
        const double env = envelope_scale(t) * std::min(cycle, 1.0);
        if (env < spec.truncation_tol) {
            // Tail became negligible on its own; no extrapolation needed.
            if (++consecutive >= kConsecutiveSmall) {
                err += env;
                return {total.value(), err};
            }
        } else {
            consecutive = 0;
        }
        if (partials.size() >= 8 && partials.size() % 4 == 0) {
            // Extrapolate a trailing window; O(w^2) per call keeps long
            // slow-decay runs from going quadratic in the cycle count.
            const std::size_t w = std::min<std::size_t>(partials.size(), 48);
            const std::vector<double> window(partials.end() - w, partials.end());
            const double limit = quad::wynn_epsilon_limit(window, accel_err);
            const double target =
                std::max(spec.abs_tol * 0.25, spec.rel_tol * std::abs(limit) * 0.25);
            if (std::isfinite(limit) && accel_err < target)
                return {limit, err + accel_err};
        }
    }
    throw budget_error("inversion: panel budget exhausted before tail convergence");
}

}  // namespace

InversionResult gil_pelaez_cdf(double z, const CfHandle& cf, const QuadratureSpec& spec) {
    spec.validate();
    const auto integrand = [&](double t) {
        const std::complex<double> v = std::exp(std::complex<double>(0.0, -t * z)) * cf(t);
        return v.imag() / t;
    };
    const auto envelope = [&](double t) { return std::abs(cf(t)) / t; };
    const auto integral = integrate_oscillatory(integrand, envelope, z, spec);

    InversionResult res;
    res.value = 0.5 - integral.value / M_PI;
    res.error_estimate = integral.error / M_PI;
    const double slack = spec.abs_tol + res.error_estimate;
    if (res.value < 0.0) {
        if (res.value < -slack)
            throw accuracy_error("gil_pelaez_cdf: value below 0 beyond tolerance");
        res.value = 0.0;
        res.clamped = true;
    } else if (res.value > 1.0) {
        if (res.value > 1.0 + slack)
            throw accuracy_error("gil_pelaez_cdf: value above 1 beyond tolerance");
        res.value = 1.0;
        res.clamped = true;
    }
    return res;
}

InversionResult fourier_pdf(double z, const CfHandle& cf, const QuadratureSpec& spec) {
    spec.validate();
    const auto integrand = [&](double t) {
        const std::complex<double> v = std::exp(std::complex<double>(0.0, -t * z)) * cf(t);
        return v.real();
    };
    const auto envelope = [&](double t) { return std::abs(cf(t)); };
    const auto integral = integrate_oscillatory(integrand, envelope, z, spec);

    InversionResult res;
    res.value = integral.value / M_PI;
    res.error_estimate = integral.error / M_PI;
    if (res.value < 0.0) {
        if (res.value < -(spec.abs_tol + res.error_estimate))
            throw accuracy_error("fourier_pdf: negative density beyond tolerance");
        res.value = 0.0;
        res.clamped = true;
    }
    return res;
}

}  // namespace mfsinr
