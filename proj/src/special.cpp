#include "mfsinr/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mfsinr/errors.hpp"

namespace mfsinr {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606065120900824024;
constexpr int kSeriesCap = 500;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

double factorial(int n) {
    static const auto table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        for (int k = 1; k <= 170; ++k) t[k] = t[k - 1] * k;
        return t;
    }();
    if (n < 0 || n > 170) throw std::domain_error("factorial: n outside [0, 170]");
    return table[n];
}

double ln_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("ln_gamma: requires x > 0");
    return std::lgamma(x);
}

double ln_beta(double a, double b) { return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b); }

double regularized_upper_gamma_int(int n, double x) {
    if (n < 0) throw std::domain_error("regularized_upper_gamma_int: requires n >= 0");
    if (!(x >= 0.0)) throw std::domain_error("regularized_upper_gamma_int: requires x >= 0");
    if (n == 0) return x > 0.0 ? 0.0 : 1.0;
    if (x == 0.0) return 1.0;
    if (x < 700.0) {
        // Terms e^{-x} x^k / k! are all <= 1 here; plain forward recurrence.
        double term = std::exp(-x);
        double sum = term;
        for (int k = 1; k < n; ++k) {
            term *= x / k;
            sum += term;
        }
        return std::min(sum, 1.0);
    }
    // Large x: sum exp(-x + k ln x - ln k!) in log space around its peak.
    double lx = std::log(x);
    double l = -x, peak = -x;
    for (int k = 1; k < n; ++k) {
        l += lx - std::log(static_cast<double>(k));
        peak = std::max(peak, l);
    }
    double s = 1.0;  // k with the peak contributes exp(0) once below
    l = -x;
    s = std::exp(l - peak);
    for (int k = 1; k < n; ++k) {
        l += lx - std::log(static_cast<double>(k));
        s += std::exp(l - peak);
    }
    return std::min(1.0, std::exp(peak) * s);
}

double regularized_lower_gamma_int(int n, double x) {
    return 1.0 - regularized_upper_gamma_int(n, x);
}

cplx lower_incomplete_gamma_int(int n, cplx z) {
    if (n < 1) throw std::domain_error("lower_incomplete_gamma_int: requires n >= 1");
    if (z == cplx(0.0, 0.0)) return {0.0, 0.0};
    if (std::abs(z) <= 0.5 * n) {
        // Ascending series: z^n e^{-z} sum_{m>=0} z^m / (n (n+1) ... (n+m)).
        cplx term = cplx(1.0 / n, 0.0);
        cplx sum = term;
        bool converged = false;
        for (int m = 1; m <= kSeriesCap; ++m) {
            term *= z / static_cast<double>(n + m);
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw accuracy_error("lower_incomplete_gamma_int: ascending series hit iteration cap");
        cplx value = std::exp(static_cast<double>(n) * std::log(z) - z) * sum;
        if (!finite(value))
            throw accuracy_error("lower_incomplete_gamma_int: series prefactor overflowed");
        return value;
    }
    if (n > 170)
        throw std::domain_error(
            "lower_incomplete_gamma_int: closed form needs n <= 170 (leading factorial not "
            "representable)");
    // (n-1)! (1 - e^{-z} sum_{m<n} z^m/m!), with the partial sum carried
    // pre-scaled by e^{-z} so real positive z never overflows the terms.
    cplx term = std::exp(-z);
    cplx scaled_sum = term;
    for (int m = 1; m < n; ++m) {
        term *= z / static_cast<double>(m);
        scaled_sum += term;
    }
    cplx value = factorial(n - 1) * (cplx(1.0, 0.0) - scaled_sum);
    if (!finite(value))
        throw accuracy_error("lower_incomplete_gamma_int: closed form overflowed");
    return value;
}

namespace {

// Power/log series for K_0, K_1 (|z| <= 8). Uses
//   K_0 = -(ln(z/2)+g) I_0 + sum_{k>=1} H_k q^k/(k!)^2
//   K_1 = 1/z + (ln(z/2)+g) I_1 - (z/4) sum_{k>=0} (H_k + H_{k+1}) q^k/(k!(k+1)!)
// with q = z^2/4, g the Euler constant, H_k the harmonic numbers.
std::pair<cplx, cplx> k01_series(cplx z) {
    const cplx q = 0.25 * z * z;
    cplx t0(1.0, 0.0), i0(1.0, 0.0), s0(0.0, 0.0);
    cplx t1(1.0, 0.0), i1s(1.0, 0.0), s1(1.0, 0.0);  // k=0: H_0 + H_1 = 1
    double hk = 0.0;
    bool converged = false;
    for (int k = 1; k <= 200; ++k) {
        t0 *= q / static_cast<double>(k) / static_cast<double>(k);
        hk += 1.0 / k;
        i0 += t0;
        s0 += t0 * hk;
        t1 *= q / static_cast<double>(k) / static_cast<double>(k + 1);
        i1s += t1;
        s1 += t1 * (2.0 * hk + 1.0 / (k + 1));
        if (std::abs(t0) < 1e-18 * (std::abs(i0) + 1.0) &&
            std::abs(t1) < 1e-18 * (std::abs(i1s) + 1.0)) {
            converged = true;
            break;
        }
    }
    if (!converged) throw accuracy_error("bessel_k0_k1: power series hit iteration cap");
    const cplx lg = std::log(0.5 * z) + kEulerGamma;
    const cplx k0 = -lg * i0 + s0;
    const cplx i1 = 0.5 * z * i1s;
    const cplx k1 = 1.0 / z + lg * i1 - 0.25 * z * s1;
    return {k0, k1};
}

// Large-argument asymptotic sums (without the sqrt(pi/2z) e^{-z} prefactor):
// sum_k a_k(nu)/z^k with a_k = a_{k-1} (4 nu^2 - (2k-1)^2)/(8k). Truncated at
// the smallest term (the expansion is divergent; at |z| >= 8 the floor is
// ~1e-15 relative).
cplx k_asym_sum(int nu, cplx z) {
    cplx term(1.0, 0.0), sum(1.0, 0.0);
    double prev = 1.0;
    const double nu2 = 4.0 * nu * nu;
    for (int k = 1; k <= 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (nu2 - odd * odd) / (8.0 * k) / z;
        const double mag = std::abs(term);
        if (mag > prev) break;  // past the smallest term; stop before divergence
        sum += term;
        if (mag < 1e-18) break;
        prev = mag;
    }
    return sum;
}

std::pair<cplx, cplx> k01_asym_scaled(cplx z) {
    const cplx pref = std::sqrt(M_PI / (2.0 * z));
    return {pref * k_asym_sum(0, z), pref * k_asym_sum(1, z)};
}

}  // namespace

std::pair<cplx, cplx> bessel_k0_k1(cplx z) {
    if (z == cplx(0.0, 0.0)) throw std::domain_error("bessel_k0_k1: z must be nonzero");
    if (z.real() < 0.0 && z.imag() == 0.0)
        throw std::domain_error("bessel_k0_k1: branch cut on the negative real axis");
    if (std::abs(z) <= 8.0) return k01_series(z);
    auto [s0, s1] = k01_asym_scaled(z);
    const cplx damp = std::exp(-z);
    cplx k0 = s0 * damp, k1 = s1 * damp;
    if (!finite(k0) || !finite(k1))
        throw accuracy_error("bessel_k0_k1: e^{-z} factor overflowed (Re z too negative)");
    return {k0, k1};
}

std::pair<cplx, cplx> bessel_k0_k1_scaled(cplx z) {
    if (z == cplx(0.0, 0.0)) throw std::domain_error("bessel_k0_k1_scaled: z must be nonzero");
    if (z.real() < 0.0 && z.imag() == 0.0)
        throw std::domain_error("bessel_k0_k1_scaled: branch cut on the negative real axis");
    if (std::abs(z) <= 8.0) {
        auto [k0, k1] = k01_series(z);
        const cplx grow = std::exp(z);
        return {k0 * grow, k1 * grow};
    }
    return k01_asym_scaled(z);
}

cplx bessel_k_int(int nu, cplx z) {
    nu = std::abs(nu);  // K_{-nu} = K_nu
    auto [km, k] = bessel_k0_k1(z);
    if (nu == 0) return km;
    for (int v = 1; v < nu; ++v) {
        cplx next = km + (2.0 * v) * k / z;
        if (!finite(next) || std::abs(next) > 1e290)
            throw accuracy_error("bessel_k_int: upward recurrence overflowed");
        km = k;
        k = next;
    }
    return k;
}

namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_cfrac(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kSeriesCap; ++m) {
        const int m2 = 2 * m;
        double coef = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + coef * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + coef / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + coef * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + coef / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 3e-16) return h;
    }
    throw accuracy_error("regularized_incomplete_beta: continued fraction hit iteration cap");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("regularized_incomplete_beta: requires a, b > 0");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("regularized_incomplete_beta: requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - ln_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cfrac(a, b, x) / a;
    return 1.0 - front * beta_cfrac(b, a, 1.0 - x) / b;
}

}  // namespace mfsinr
