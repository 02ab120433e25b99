#pragma once

#include "impatience/discount.hpp"

#include <span>
#include <vector>

namespace impatience {

/// Lower bound on 1 - gamma; tails flatter than this are rejected.
inline constexpr double kMinTailGap = 1e-6;

/// Nonnegative weights alpha(s) with h(t) = sum_s alpha(s) min(s, t).
///
/// alpha has one entry per s = 0..T-1; alpha[0] is fixed to 0.
struct MinBasis {
    std::vector<double> alpha;

    /// sum_s alpha(s) min(s, t)
    double evaluate(int t) const;
};

/// One generalized beta-delta factor beta^min(switch, t) delta^t with geometric weight eta.
struct BetaDeltaComponent {
    double beta = 1.0;
    double delta = 1.0;
    int switch_period = 1;
    double eta = 1.0;

    friend bool operator==(const BetaDeltaComponent&, const BetaDeltaComponent&) = default;
};

/// f(t) = scale * prod_c component_c(t)^eta_c, together with the intermediates that built it.
struct Decomposition {
    int horizon = 0;
    double scale = 1.0;
    double gamma = 1.0;
    std::vector<BetaDeltaComponent> components;
    std::vector<double> h;  ///< log g(0) - log g(t): increasing, concave, flat at the end
    std::vector<double> g;  ///< gamma^-t f(t)
    MinBasis basis;
};

/// f(T)/f(T-1), the largest impatience ratio of a decreasing-impatience factor.
double tail_ratio(const DiscountFactor& f);

/// Second differences alpha(t) = -h(t+1) + 2h(t) - h(t-1) for t = 1..T-1.
///
/// Requires h(0) = 0 and h(T) = h(T-1). Entries more negative than -tolerance raise
/// NotConcave; smaller negatives are clamped to zero.
MinBasis min_basis_weights(std::span<const double> h, double tolerance = 1e-12);

/// Geometric-mean decomposition into generalized beta-delta factors sharing delta = gamma.
Decomposition decompose(const DiscountFactor& f);

DiscountFactor reconstruct(const Decomposition& d, int horizon);

}  // namespace impatience
