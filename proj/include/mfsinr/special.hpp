#pragma once

#include <complex>

namespace mfsinr {

using cplx = std::complex<double>;

// Regularized upper incomplete gamma Q(n, x) = Gamma(n, x)/Gamma(n) for integer
// n >= 0 and real x >= 0, evaluated through the finite Poisson sum
// e^{-x} sum_{k<n} x^k/k! (switching to log-space summation for large x so no
// intermediate under/overflows). Q(0, x) is 0 for x > 0 and 1 at x = 0.
double regularized_upper_gamma_int(int n, double x);

// Regularized lower companion P(n, x) = 1 - Q(n, x).
double regularized_lower_gamma_int(int n, double x);

// Lower incomplete gamma gamma(n, z) on the principal branch for integer
// n >= 1 and complex z. Ascending series for |z| <= n/2, closed form
// (n-1)! (1 - e^{-z} sum_{m<n} z^m/m!) otherwise. The closed form cancels a
// couple of digits against (n-1)! near the crossover, where the two branches
// agree to ~1e-8 relative for moderate n.
// Throws accuracy_error if the series fails to converge within 500 terms and
// domain_error for n < 1 (or n > 170 on the closed-form branch, where the
// leading factorial is not representable in double).
cplx lower_incomplete_gamma_int(int n, cplx z);

// Modified Bessel functions K_0 and K_1 of complex argument, |arg z| < pi,
// z != 0: power/log series for |z| <= 8, large-argument asymptotic expansion
// beyond. first = K_0(z), second = K_1(z).
std::pair<cplx, cplx> bessel_k0_k1(cplx z);

// As above but scaled by e^{z}: returns (e^z K_0(z), e^z K_1(z)). Used where
// the unscaled values would underflow while the final product is moderate.
std::pair<cplx, cplx> bessel_k0_k1_scaled(cplx z);

// Integer-order K_nu(z) via upward recurrence K_{v+1} = K_{v-1} + (2v/z) K_v
// from (K_0, K_1). nu may be any integer (K_{-nu} = K_nu). Throws
// accuracy_error if the recurrence overflows before reaching nu.
cplx bessel_k_int(int nu, cplx z);

// Regularized incomplete beta I_x(a, b) for a, b > 0, x in [0, 1], by the
// standard continued fraction with the symmetry reduction
// I_x(a,b) = 1 - I_{1-x}(b,a) applied when x > (a+1)/(a+b+2).
// Throws accuracy_error if the continued fraction needs more than 500 terms.
double regularized_incomplete_beta(double a, double b, double x);

// log Gamma(x) for x > 0 and log B(a, b) = lgamma(a)+lgamma(b)-lgamma(a+b).
double ln_gamma(double x);
double ln_beta(double a, double b);

// n! as a double for 0 <= n <= 170; domain_error beyond (not representable).
double factorial(int n);

}  // namespace mfsinr
