#include "mfsinr/sinr_dist.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfsinr/errors.hpp"
#include "mfsinr/quadrature.hpp"
#include "mfsinr/special.hpp"

namespace mfsinr {

std::string method_name(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::beta_approx: return "beta_approx";
        case Method::high_snr_beta: return "high_snr_beta";
        case Method::monte_carlo: return "monte_carlo";
        case Method::scaled_inverse_limit: return "scaled_inverse_limit";
        case Method::massive_limit: return "massive_limit";
    }
    throw std::logic_error("method_name: unknown method");
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::domain_error("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double step = (std::log(hi) - std::log(lo)) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = std::exp(std::log(lo) + step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_gamma_grid(const SystemConfig& cfg, int n) {
    cfg.validate();
    const double center = static_cast<double>(cfg.L) / cfg.K;
    return log_grid(1e-3 * center, 1e3 * center, n);
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Evaluates one point per grid entry, catching per-point numeric failures so
// a single bad point doesn't take down the whole curve.
template <typename F>
DistributionCurve build_curve(CurveKind kind, Method method, const SystemConfig& cfg,
                              const std::vector<double>& grid, F&& eval) {
    DistributionCurve curve;
    curve.kind = kind;
    curve.method = method;
    curve.cfg = cfg;
    curve.grid = grid;
    curve.values.resize(grid.size(), kNaN);
    curve.error_estimates.resize(grid.size(), 0.0);
    curve.ok.assign(grid.size(), 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            double err = 0.0;
            curve.values[i] = eval(grid[i], err);
            curve.error_estimates[i] = err;
        } catch (const budget_error&) {
            curve.ok[i] = 0;
            curve.error_estimates[i] = std::numeric_limits<double>::infinity();
        } catch (const accuracy_error&) {
            curve.ok[i] = 0;
            curve.error_estimates[i] = std::numeric_limits<double>::infinity();
        }
    }
    return curve;
}

double gamma_cdf_closed_k1(double gamma, const SystemConfig& cfg) {
    // K = 1: SINR = (p_t/sigma2) ||h||^2 with ||h||^2 ~ Gamma(L, 1).
    return regularized_lower_gamma_int(cfg.L, gamma * cfg.noise_ratio());
}

double gamma_pdf_closed_k1(double gamma, const SystemConfig& cfg) {
    const double a = cfg.noise_ratio();
    const double x = gamma * a;
    if (x <= 0.0) return 0.0;
    return a * std::exp((cfg.L - 1) * std::log(x) - x - ln_gamma(cfg.L));
}

}  // namespace

double sinr_cdf_exact_at(double gamma, const SystemConfig& cfg, const QuadratureSpec& spec,
                         InversionResult* detail) {
    cfg.validate();
    if (gamma <= 0.0) {
        if (detail) *detail = {};
        return 0.0;
    }
    if (cfg.K == 1) {
        if (detail) *detail = {};
        return gamma_cdf_closed_k1(gamma, cfg);
    }
    const CfHandle cf = [&cfg](double t) { return cf_denominator(t, cfg); };
    const InversionResult r = gil_pelaez_cdf(1.0 / gamma, cf, spec);
    if (detail) *detail = r;
    return 1.0 - r.value;
}

double sinr_pdf_exact_at(double gamma, const SystemConfig& cfg, const QuadratureSpec& spec,
                         InversionResult* detail) {
    cfg.validate();
    if (gamma <= 0.0) {
        if (detail) *detail = {};
        return 0.0;
    }
    if (cfg.K == 1) {
        if (detail) *detail = {};
        return gamma_pdf_closed_k1(gamma, cfg);
    }
    const CfHandle cf = [&cfg](double t) { return cf_denominator(t, cfg); };
    const InversionResult r = fourier_pdf(1.0 / gamma, cf, spec);
    if (detail) *detail = r;
    return r.value / (gamma * gamma);
}

DistributionCurve sinr_cdf_exact(const std::vector<double>& grid, const SystemConfig& cfg,
                                 const QuadratureSpec& spec) {
    return build_curve(CurveKind::cdf, Method::exact, cfg, grid, [&](double g, double& err) {
        InversionResult r;
        const double v = sinr_cdf_exact_at(g, cfg, spec, &r);
        err = r.error_estimate;
        return v;
    });
}

DistributionCurve sinr_pdf_exact(const std::vector<double>& grid, const SystemConfig& cfg,
                                 const QuadratureSpec& spec) {
    return build_curve(CurveKind::pdf, Method::exact, cfg, grid, [&](double g, double& err) {
        InversionResult r;
        const double v = sinr_pdf_exact_at(g, cfg, spec, &r);
        err = r.error_estimate / (g * g);
        return v;
    });
}

double outage_probability(double gamma_th, const SystemConfig& cfg, const QuadratureSpec& spec) {
    return sinr_cdf_exact_at(gamma_th, cfg, spec);
}

BetaApproxParams beta_approx_params(const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.K < 2) throw std::domain_error("beta_approx_params: requires K >= 2");
    // Integer numerators; the only rounding is the final division by L.
    const long long num = static_cast<long long>(cfg.K - 1) * (cfg.L + 1) - 1;
    BetaApproxParams p;
    p.alpha = static_cast<double>(num) / cfg.L;
    p.beta = static_cast<double>(num * (cfg.L - 1)) / cfg.L;
    return p;
}

double sinr_cdf_beta_approx_at(double gamma, const SystemConfig& cfg,
                               const QuadratureSpec& spec) {
    cfg.validate();
    spec.validate();
    if (cfg.K < 2) throw std::domain_error("sinr_cdf_beta_approx_at: requires K >= 2");
    if (gamma <= 0.0) return 0.0;
    const auto p = beta_approx_params(cfg);
    const double a = cfg.noise_ratio();
    const double inv_g = 1.0 / gamma;
    const int km1 = cfg.K - 1;
    const double xi = std::min(inv_g / km1, 1.0);
    const double ln_b = ln_beta(p.alpha, p.beta);
    const auto integrand = [&](double x) {
        if (x <= 0.0 || x >= 1.0) return 0.0;
        const double w = inv_g - km1 * x;
        if (w <= 0.0) return 0.0;
        const double density =
            std::exp((p.alpha - 1.0) * std::log(x) + (p.beta - 1.0) * std::log1p(-x) - ln_b);
        return density * regularized_upper_gamma_int(cfg.L, a / w);
    };
    std::size_t used = 0;
    const auto r = quad::integrate_adaptive(integrand, 0.0, xi, spec.abs_tol / 4.0, 24, used,
                                            static_cast<std::size_t>(spec.max_panels));
    // The integral is P(denominator < 1/gamma) = P(SINR > gamma).
    return std::min(std::max(1.0 - r.value, 0.0), 1.0);
}

DistributionCurve sinr_cdf_beta_approx(const std::vector<double>& grid, const SystemConfig& cfg,
                                       const QuadratureSpec& spec) {
    return build_curve(CurveKind::cdf, Method::beta_approx, cfg, grid,
                       [&](double g, double& err) {
                           err = spec.abs_tol;  // adaptive target; see integrate_adaptive
                           return sinr_cdf_beta_approx_at(g, cfg, spec);
                       });
}

double sinr_cdf_high_snr_beta_at(double gamma, const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.K < 2) throw std::domain_error("sinr_cdf_high_snr_beta_at: requires K >= 2");
    if (gamma <= 0.0) return 0.0;
    const auto p = beta_approx_params(cfg);
    const double xi = std::min(1.0 / ((cfg.K - 1) * gamma), 1.0);
    // 1 - I_xi(a, b) evaluated as I_{1-xi}(b, a): keeps full relative
    // precision in the deep upper tail, where the direct subtraction would
    // cancel to ~1e-16 absolute.
    return regularized_incomplete_beta(p.beta, p.alpha, 1.0 - xi);
}

DistributionCurve sinr_cdf_high_snr_beta(const std::vector<double>& grid,
                                         const SystemConfig& cfg) {
    return build_curve(CurveKind::cdf, Method::high_snr_beta, cfg, grid,
                       [&](double g, double&) { return sinr_cdf_high_snr_beta_at(g, cfg); });
}

double scaled_inverse_sinr_cdf_at(double x, const SystemConfig& cfg, const QuadratureSpec& spec,
                                  bool high_snr_limit) {
    cfg.validate();
    if (cfg.K < 2) throw std::domain_error("scaled_inverse_sinr_cdf_at: requires K >= 2");
    if (x <= 0.0) return 0.0;
    const int km1 = cfg.K - 1;
    if (!high_snr_limit) {
        // P(1/((K-1) SINR) <= x) = P(SINR >= 1/((K-1)x)) = 1 - F_SINR.
        return 1.0 - sinr_cdf_exact_at(1.0 / (km1 * x), cfg, spec);
    }
    if (x >= 1.0) return 1.0;  // the averaged interference sum lives on [0, 1]
    const int L = cfg.L;
    const CfHandle cf = [L, km1](double t) {
        return ipow(cf_interference_single(t / km1, L), km1);
    };
    return gil_pelaez_cdf(x, cf, spec).value;
}

DistributionCurve scaled_inverse_sinr_cdf(const std::vector<double>& grid,
                                          const SystemConfig& cfg, const QuadratureSpec& spec,
                                          bool high_snr_limit) {
    return build_curve(CurveKind::cdf,
                       high_snr_limit ? Method::scaled_inverse_limit : Method::exact, cfg, grid,
                       [&](double x, double&) {
                           return scaled_inverse_sinr_cdf_at(x, cfg, spec, high_snr_limit);
                       });
}

double massive_limit_cdf_at(double x, const SystemConfig& cfg) {
    cfg.validate();
    if (x <= 0.0) return 0.0;
    const double y = 1.0 / x - cfg.noise_ratio();
    if (y <= 0.0) return 1.0;
    return regularized_upper_gamma_int(cfg.K - 1, y);
}

DistributionCurve massive_limit_cdf(const std::vector<double>& grid, const SystemConfig& cfg) {
    return build_curve(CurveKind::cdf, Method::massive_limit, cfg, grid,
                       [&](double x, double&) { return massive_limit_cdf_at(x, cfg); });
}

double nonconvergence_probability_bound(double eps) {
    if (!(eps > 0.0)) throw std::domain_error("nonconvergence_probability_bound: eps must be > 0");
    return std::expm1(eps) - std::expm1(-eps);
}

}  // namespace mfsinr
