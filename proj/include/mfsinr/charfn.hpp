#pragma once

#include <complex>

namespace mfsinr {

using cplx = std::complex<double>;

// System under study: K single-antenna users served by an L-antenna
// transmitter with total power p_t and per-receiver noise variance sigma2.
struct SystemConfig {
    int L = 2;          ///< transmit antennas (>= 2)
    int K = 2;          ///< users (>= 1; K = 1 means no interference)
    double p_t = 1.0;   ///< total transmit power (> 0), linear scale
    double sigma2 = 1.0;  ///< noise variance (> 0)

    // Throws std::domain_error if any field is out of range.
    void validate() const;

    // a = K sigma2 / p_t, the scale of the noise term in the SINR denominator.
    double noise_ratio() const { return K * sigma2 / p_t; }
};

// Square-root branch selector for the noise-term CF. `flipped` negates the
// principal square root; it exists only as a debug negative control (a wrong
// branch must be caught by the distribution-level checks, and the self test
// verifies that it is).
enum class SqrtBranch { principal, flipped };

// CF of a single interference ratio term (a Beta(1, L-1) variable):
//   E[e^{itX}] = (L-1) e^{it} (it)^{1-L} * lower_gamma(L-1, it).
// The closed form cancels catastrophically for |t| below ~L (its partial sums
// peak around ln Gamma(L) - ln Gamma(floor|t|+1) - (L-1-floor|t|) ln|t| e-folds
// above the result), so the implementation measures that loss and switches to
// the cancellation-free moment series sum_m (it)^m (L-1)!/(L-1+m)! whenever
// more than ~4 digits would be lost. Both branches keep every intermediate
// below ~1e260 and the result is always |CF| <= 1 + eps.
cplx cf_interference_single(double t, int L);

// CF of the sum of the K-1 i.i.d. interference terms: the above to the
// (K-1)-th power (exact integer power by repeated multiplication). K = 1
// yields 1 (the CF of zero interference).
cplx cf_interference_sum(double t, const SystemConfig& cfg);

// CF of the noise term a/||h_k||^2 (a scaled inverse-gamma variable):
//   E[e^{itY}] = (2/Gamma(L)) (-i a t)^{L/2} K_L(2 sqrt(-i a t)),
// principal branches. Evaluated via the factorial-normalized Bessel
// recurrence R_{v+1} = R_v + (-i a t) R_{v-1} / (v(v-1)) starting from
// R_1 = w K_1(w), R_2 = (w^2/2) K_0(w) + w K_1(w), w = 2 sqrt(-i a t), which
// keeps every iterate bounded by 1 for any L. t = 0 returns exactly 1.
cplx cf_noise_term(double t, const SystemConfig& cfg,
                   SqrtBranch branch = SqrtBranch::principal);

// CF of the whole SINR denominator Z = noise term + interference sum:
// product of the two factors above (independence).
cplx cf_denominator(double t, const SystemConfig& cfg,
                    SqrtBranch branch = SqrtBranch::principal);

// Exact integer power by binary exponentiation (used for the CF product and
// exposed for tests).
cplx ipow(cplx base, int exp);

}  // namespace mfsinr
