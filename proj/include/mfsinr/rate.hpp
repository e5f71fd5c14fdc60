#pragma once

#include <cstdint>

#include "mfsinr/charfn.hpp"
#include "mfsinr/montecarlo.hpp"

namespace mfsinr {

// Mean and variance of the SINR denominator Z = noise term + interference sum:
//   mean     = a/(L-1) + (K-1)/L
//   variance = a^2/((L-1)^2 (L-2)) + (K-1)(L-1)/(L^2 (L+1))
// with a = K sigma2/p_t. The variance of the inverse-gamma part only exists
// for L > 2; denominator_moments throws domain_error at L = 2.
struct DenominatorMoments {
    double mean = 0.0;
    double variance = 0.0;
};
DenominatorMoments denominator_moments(const SystemConfig& cfg);

// Jensen-style lower estimate ln(1 + 1/mean(Z)). Valid for L >= 2.
double ergodic_rate_jensen(const SystemConfig& cfg);

// Second-order (variance-corrected) estimate
//   ln(1 + 1/mu) + (var/2) (2 mu + 1) / (mu^2 (mu+1)^2).
// Requires L > 2 (uses the variance).
double ergodic_rate_robust(const SystemConfig& cfg);

// Large-system limit at antenna/user ratio c = L/K: ln(1 + c p_t/(p_t + sigma2)).
double ergodic_rate_asymptotic(double c, double p_t, double sigma2);

// Monte Carlo estimate of E[ln(1 + SINR)] with its standard error.
// Deterministic for a fixed (n_samples, seed) regardless of shard count.
struct RateEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};
RateEstimate ergodic_rate_mc(const SystemConfig& cfg, const mc::McSpec& spec);

// Same estimate from a pre-drawn power-independent batch, so a single batch
// can serve a whole power sweep. Summation order is fixed, so the result is
// deterministic for a given batch.
RateEstimate ergodic_rate_from_sig_int(const mc::SigIntBatch& batch, const SystemConfig& cfg);

}  // namespace mfsinr
