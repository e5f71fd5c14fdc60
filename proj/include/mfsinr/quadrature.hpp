#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mfsinr::quad {

struct PanelResult {
    double value = 0.0;
    double error = 0.0;  ///< |Kronrod - Gauss| based estimate
};

// One 15-point Gauss-Kronrod panel on [a, b].
PanelResult gk15(const std::function<double(double)>& f, double a, double b);

// Adaptive bisection of [a, b] until every accepted panel's error estimate is
// below tol (absolute, per panel) or depth/budget limits are hit.
// `panels_used` is incremented by every gk15 evaluation; if it would exceed
// `panel_budget` a budget_error is thrown. Error estimates of accepted panels
// accumulate into the returned .error.
PanelResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth, std::size_t& panels_used,
                               std::size_t panel_budget);

// Limit of a sequence of partial sums by Wynn's epsilon algorithm (even
// columns of the epsilon table). Returns the most converged estimate and
// writes |last improvement| into err_estimate. Needs >= 3 entries.
double wynn_epsilon_limit(const std::vector<double>& partial_sums, double& err_estimate);

// Kahan-compensated accumulator for long panel sums.
struct KahanSum {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace mfsinr::quad
