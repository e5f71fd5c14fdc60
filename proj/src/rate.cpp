#include "mfsinr/rate.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mfsinr/quadrature.hpp"

namespace mfsinr {

DenominatorMoments denominator_moments(const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.L <= 2)
        throw std::domain_error(
            "denominator_moments: variance of the noise term requires L > 2");
    const double a = cfg.noise_ratio();
    const double l = cfg.L, k = cfg.K;
    DenominatorMoments m;
    m.mean = a / (l - 1.0) + (k - 1.0) / l;
    m.variance = a * a / ((l - 1.0) * (l - 1.0) * (l - 2.0)) +
                 (k - 1.0) * (l - 1.0) / (l * l * (l + 1.0));
    return m;
}

double ergodic_rate_jensen(const SystemConfig& cfg) {
    cfg.validate();
    const double mu = cfg.noise_ratio() / (cfg.L - 1.0) + (cfg.K - 1.0) / cfg.L;
    return std::log1p(1.0 / mu);
}

double ergodic_rate_robust(const SystemConfig& cfg) {
    const auto m = denominator_moments(cfg);
    const double mu = m.mean;
    return std::log1p(1.0 / mu) +
           0.5 * m.variance * (2.0 * mu + 1.0) / (mu * mu * (mu + 1.0) * (mu + 1.0));
}

double ergodic_rate_asymptotic(double c, double p_t, double sigma2) {
    if (!(c > 0.0) || !(p_t > 0.0) || !(sigma2 > 0.0))
        throw std::domain_error("ergodic_rate_asymptotic: all arguments must be > 0");
    return std::log1p(c * p_t / (p_t + sigma2));
}

RateEstimate ergodic_rate_from_sig_int(const mc::SigIntBatch& batch, const SystemConfig& cfg) {
    cfg.validate();
    if (batch.signal.empty() || batch.signal.size() != batch.interference.size())
        throw std::domain_error("ergodic_rate_from_sig_int: empty or mismatched batch");
    const double scale = cfg.p_t / cfg.K;
    quad::KahanSum total, total_sq;
    for (std::size_t j = 0; j < batch.signal.size(); ++j) {
        const double sinr =
            scale * batch.signal[j] / (cfg.sigma2 + scale * batch.interference[j]);
        const double r = std::log1p(sinr);
        total.add(r);
        total_sq.add(r * r);
    }
    const double n = static_cast<double>(batch.signal.size());
    RateEstimate est;
    est.n_samples = batch.signal.size();
    est.mean = total.value() / n;
    const double var =
        std::max(0.0, (total_sq.value() - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
    return est;
}

RateEstimate ergodic_rate_mc(const SystemConfig& cfg, const mc::McSpec& spec) {
    cfg.validate();
    return ergodic_rate_from_sig_int(mc::sample_sig_int(cfg.L, cfg.K, spec), cfg);
}

}  // namespace mfsinr
