#include "mfsinr/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mfsinr/errors.hpp"
#include "mfsinr/special.hpp"

namespace mfsinr {

void SystemConfig::validate() const {
    if (L < 2) throw std::domain_error("SystemConfig: L must be >= 2");
    if (K < 1) throw std::domain_error("SystemConfig: K must be >= 1");
    if (!(p_t > 0.0) || !std::isfinite(p_t))
        throw std::domain_error("SystemConfig: p_t must be positive and finite");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::domain_error("SystemConfig: sigma2 must be positive and finite");
}

cplx ipow(cplx base, int exp) {
    if (exp < 0) return 1.0 / ipow(base, -exp);
    cplx r(1.0, 0.0);
    while (exp > 0) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

namespace {

// Moment series E[e^{itX}] = sum_m (it)^m (L-1)!/(L-1+m)!. The term ratio is
// |t|/(L-1+m) < 1 for every m >= 1 whenever |t| < L, so in that range the
// terms decay monotonically and the sum is cancellation-free.
cplx interference_moment_series(double t, int L) {
    const cplx it(0.0, t);
    cplx term(1.0, 0.0), sum(1.0, 0.0);
    for (int m = 1; m <= 2000; ++m) {
        term *= it / static_cast<double>(L - 1 + m);
        sum += term;
        if (std::abs(term) < 1e-18) return sum;
    }
    throw accuracy_error("cf_interference_single: moment series hit iteration cap");
}

// Fused closed form (L-1) e^{it} (it)^{1-L} gamma(L-1, it), expanded so only
// negative powers u = 1/(it) appear:
//   CF = (L-1)! u^{L-1} e^{it} - sum_{r=1}^{L-1} [(L-1)(L-2)...(L-r)] u^r.
// The two sides cancel down to an O(1) result from intermediates of size
// (L-1)!/|t|^{L-1}, so this is only used where that ratio is small.
cplx interference_closed_form(double t, int L) {
    const cplx u = 1.0 / cplx(0.0, t);
    cplx p(1.0, 0.0), sum(0.0, 0.0);
    for (int r = 1; r <= L - 1; ++r) {
        p *= static_cast<double>(L - r) * u;
        sum += p;
    }
    return p * std::exp(cplx(0.0, t)) - sum;
}

}  // namespace

cplx cf_interference_single(double t, int L) {
    if (L < 2) throw std::domain_error("cf_interference_single: L must be >= 2");
    if (t == 0.0) return {1.0, 0.0};
    const double at = std::abs(t);
    // The closed form's running products peak at sum_{t < k <= L-1} ln(k/|t|)
    // = lnG(L) - lnG(m+1) - (L-1-m) ln|t| with m = clamp(floor(|t|), 0, L-1);
    // that many e-folds cancel against an O(1) result. Use it only when fewer
    // than ~4 digits are lost. m must reach 0 for |t| < 1: every one of the
    // L-1 factors k/|t| amplifies there, and flooring m at 1 would undercount
    // the peak by a factor 1/|t|. The crossover always lies below L-1, where
    // the moment series (term ratio |t|/(L-1+m) < 1) is still
    // cancellation-free, so both branches are accurate at the switch.
    const int m = std::clamp(static_cast<int>(at), 0, L - 1);
    const double cancellation = ln_gamma(L) - ln_gamma(m + 1) - (L - 1 - m) * std::log(at);
    if (cancellation <= 4.0 * M_LN10) return interference_closed_form(t, L);
    return interference_moment_series(t, L);
}

cplx cf_interference_sum(double t, const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.K == 1) return {1.0, 0.0};
    return ipow(cf_interference_single(t, cfg.L), cfg.K - 1);
}

cplx cf_noise_term(double t, const SystemConfig& cfg, SqrtBranch branch) {
    cfg.validate();
    if (t == 0.0) return {1.0, 0.0};
    const double a = cfg.noise_ratio();
    const cplx zeta = cplx(0.0, -1.0) * (a * t);  // w^2/4
    cplx w = 2.0 * std::sqrt(zeta);
    if (branch == SqrtBranch::flipped) w = -w;
    // Scaled Bessel K via the asymptotic/series split, with e^{-w} applied
    // afterwards so a deeply damped tail underflows to 0 instead of NaN.
    auto [k0s, k1s] = bessel_k0_k1_scaled(w);
    const cplx damp = std::exp(-w);
    const cplx k0 = k0s * damp, k1 = k1s * damp;
    if (!std::isfinite(k0.real()) || !std::isfinite(k0.imag()) ||
        !std::isfinite(k1.real()) || !std::isfinite(k1.imag()))
        throw accuracy_error("cf_noise_term: Bessel factor overflowed");
    // R_v = (2/Gamma(v)) (w/2)^v K_v(w); R_1 = w K_1, R_2 = (w^2/2) K_0 + w K_1
    // with w^2/2 = 2 zeta. L = 2 returns R_2 directly (loop body not entered).
    cplx r_prev = w * k1;
    cplx r_cur = 2.0 * zeta * k0 + w * k1;
    for (int v = 2; v < cfg.L; ++v) {
        const cplx r_next = r_cur + zeta * r_prev / (static_cast<double>(v) * (v - 1.0));
        r_prev = r_cur;
        r_cur = r_next;
    }
    return r_cur;
}

cplx cf_denominator(double t, const SystemConfig& cfg, SqrtBranch branch) {
    return cf_noise_term(t, cfg, branch) * cf_interference_sum(t, cfg);
}

}  // namespace mfsinr
