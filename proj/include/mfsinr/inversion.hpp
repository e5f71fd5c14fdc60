#pragma once

#include <complex>
#include <functional>
#include <string>

namespace mfsinr {

// Controls for the characteristic-function inversion quadrature.
struct QuadratureSpec {
    double abs_tol = 1e-9;        ///< absolute error target for the integral
    double rel_tol = 1e-7;        ///< relative error target
    int max_panels = 2000;        ///< total 15-point panel budget per inversion
    std::string panel_rule = "gk15";  ///< only "gk15" is implemented
    double truncation_tol = 1e-12;  ///< tail envelope threshold for truncation
    double t_min = 1e-10;         ///< lower end of the frequency integration

    void validate() const;
};

using CfHandle = std::function<std::complex<double>(double)>;

struct InversionResult {
    double value = 0.0;
    double error_estimate = 0.0;  ///< quadrature + truncation + extrapolation estimate
    bool clamped = false;         ///< value was pulled back into its valid range
};

// CDF at z of the distribution with characteristic function cf, via
//   F(z) = 1/2 - (1/pi) int_0^inf Im[e^{-itz} cf(t)]/t dt.
// Marches panels of width min(pi/|z|, 1) from t_min, truncating once the
// envelope |cf(t)|/t * width stays below truncation_tol for 5 consecutive
// panels. If the envelope has not died by a fraction of the panel budget, the
// remaining oscillatory tail is summed half-period by half-period and
// extrapolated with Wynn's epsilon algorithm. Values are clamped into [0, 1]
// when they stray by less than abs_tol + the run's own error estimate;
// anything worse raises accuracy_error, and exhausting max_panels raises
// budget_error.
InversionResult gil_pelaez_cdf(double z, const CfHandle& cf, const QuadratureSpec& spec = {});

// Density at z: f(z) = (1/pi) int_0^inf Re[e^{-itz} cf(t)] dt, same panel,
// truncation (envelope |cf(t)| * width) and acceleration machinery. Small
// negative values are clamped to 0 with .clamped set; larger ones raise.
InversionResult fourier_pdf(double z, const CfHandle& cf, const QuadratureSpec& spec = {});

}  // namespace mfsinr
