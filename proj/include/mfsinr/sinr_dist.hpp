#pragma once

#include <string>
#include <vector>

#include "mfsinr/charfn.hpp"
#include "mfsinr/inversion.hpp"

namespace mfsinr {

enum class CurveKind { cdf, pdf };
enum class Method { exact, beta_approx, high_snr_beta, monte_carlo, scaled_inverse_limit,
                    massive_limit };

std::string method_name(Method m);

// An evaluated distribution curve: values[i] at grid[i], with per-point error
// estimates for quadrature-backed methods (0 for closed forms) and a per-point
// ok flag (false marks a quadrature failure at that point; value is NaN there
// and the rest of the curve is still usable).
struct DistributionCurve {
    CurveKind kind = CurveKind::cdf;
    Method method = Method::exact;
    SystemConfig cfg;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> error_estimates;
    std::vector<unsigned char> ok;
};

// Logarithmically spaced grid with n points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);
// Default SINR grid: 200 log-spaced points on [1e-3, 1e3] * (L/K).
std::vector<double> default_gamma_grid(const SystemConfig& cfg, int n = 200);

// ---- exact distribution (characteristic-function inversion) ----
// F_SINR(g) = 1 - F_Z(1/g) where Z is the SINR denominator; K = 1 collapses
// to the closed Gamma form and never runs the inversion.
double sinr_cdf_exact_at(double gamma, const SystemConfig& cfg, const QuadratureSpec& spec = {},
                         InversionResult* detail = nullptr);
double sinr_pdf_exact_at(double gamma, const SystemConfig& cfg, const QuadratureSpec& spec = {},
                         InversionResult* detail = nullptr);
DistributionCurve sinr_cdf_exact(const std::vector<double>& grid, const SystemConfig& cfg,
                                 const QuadratureSpec& spec = {});
DistributionCurve sinr_pdf_exact(const std::vector<double>& grid, const SystemConfig& cfg,
                                 const QuadratureSpec& spec = {});
// Outage probability at threshold g: P(SINR <= g), i.e. the exact CDF there.
double outage_probability(double gamma_th, const SystemConfig& cfg,
                          const QuadratureSpec& spec = {});

// ---- Beta approximation of the interference sum ----
struct BetaApproxParams {
    double alpha = 0.0, beta = 0.0;
};
// alpha = ((K-1)(L+1) - 1)/L, beta = alpha (L-1); integer arithmetic until the
// single final division. Requires K >= 2.
BetaApproxParams beta_approx_params(const SystemConfig& cfg);
// CDF approximation: integral over the Beta density of the conditional noise
// CDF, supported on [0, xi], xi = min(1/((K-1) g), 1).
double sinr_cdf_beta_approx_at(double gamma, const SystemConfig& cfg,
                               const QuadratureSpec& spec = {});
DistributionCurve sinr_cdf_beta_approx(const std::vector<double>& grid, const SystemConfig& cfg,
                                       const QuadratureSpec& spec = {});
// High-SNR closed form of the same approximation: 1 - I_xi(alpha, beta).
double sinr_cdf_high_snr_beta_at(double gamma, const SystemConfig& cfg);
DistributionCurve sinr_cdf_high_snr_beta(const std::vector<double>& grid,
                                         const SystemConfig& cfg);

// ---- limit distributions ----
// CDF of 1/((K-1) SINR) at finite power (exact complement identity) or, with
// high_snr_limit, its P_t -> infinity limit (inverting the CF of the averaged
// interference sum; independent of p_t and sigma2).
double scaled_inverse_sinr_cdf_at(double x, const SystemConfig& cfg,
                                  const QuadratureSpec& spec = {}, bool high_snr_limit = false);
DistributionCurve scaled_inverse_sinr_cdf(const std::vector<double>& grid,
                                          const SystemConfig& cfg,
                                          const QuadratureSpec& spec = {},
                                          bool high_snr_limit = false);
// Massive-antenna limit of SINR/L: P(limit <= x) = Q(K-1, 1/x - a) for
// 1/x > a, else 1, with a = K sigma2 / p_t.
double massive_limit_cdf_at(double x, const SystemConfig& cfg);
DistributionCurve massive_limit_cdf(const std::vector<double>& grid, const SystemConfig& cfg);

// Upper bound e^eps - e^{-eps} on P(|X' - L X_i| <= eps) for X' a unit
// exponential drawn independently of the interference ratio X_i. Although
// L X_i converges to Exp(1) in distribution as L grows, this bound stays
// bounded away from 1, witnessing that the convergence is not in probability
// against an independent companion draw.
double nonconvergence_probability_bound(double eps);

}  // namespace mfsinr
