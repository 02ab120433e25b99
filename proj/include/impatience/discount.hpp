#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace impatience {

/// Relative tolerance for the log-convexity cross-product test.
inline constexpr double kDefaultRelTol = 1e-10;
/// Absolute slack of the compound-interest inequality, as a multiple of its largest term.
inline constexpr double kAxiomSlack = 1e-12;
/// Smallest value accepted in a discount factor; ratio chains below this underflow.
inline constexpr double kMinValue = 1e-300;

/// Finite truncation f(0..T) of a positive, weakly decreasing discount factor.
///
/// Values are stored as given; no normalization f(0) = 1 is applied.
class DiscountFactor {
public:
    /// Validating constructor. Throws Error{TooShort, NonPositiveValue, NotDecreasing}.
    explicit DiscountFactor(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }
    int horizon() const noexcept { return static_cast<int>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t t) const noexcept { return values_[t]; }
    double at(int t) const;

    friend bool operator==(const DiscountFactor&, const DiscountFactor&) = default;

private:
    std::vector<double> values_;
};

/// Nonnegative payoff stream x(0..T).
class Stream {
public:
    explicit Stream(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    int horizon() const noexcept { return static_cast<int>(values_.size()) - 1; }

private:
    std::vector<double> values_;
};

/// A reward of `amount` paid at `date` and nothing else.
struct DatedReward {
    double amount = 0.0;
    int date = 0;
};

/// A single compound-interest choice that the preference gets wrong.
///
/// At k = 1 the split bundle is worth `lhs` and the lump at `period` is worth `rhs`;
/// lhs < rhs certifies a violation.
struct ConvexityWitness {
    int period = 0;
    double rate = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;

    bool certifies_violation() const noexcept { return lhs < rhs; }
};

enum class Preference { APreferred, BPreferred, Indifferent };

DiscountFactor make_discount_factor(std::vector<double> values);

/// values[t] = beta^min(switch, t) * delta^t for t = 0..horizon.
DiscountFactor from_generalized_beta_delta(double beta, double delta, int switch_period, int horizon);

/// r[t] = f(t+1)/f(t), t = 0..T-1.
std::vector<double> impatience_ratios(const DiscountFactor& f);

/// Log-convexity: f(t+1)^2 <= f(t) f(t+2) (1 + rel_tol) for every t <= T-2.
bool is_decreasing_impatience(const DiscountFactor& f, double rel_tol = kDefaultRelTol);

/// Log-concavity: f(t+1)^2 >= f(t) f(t+2) / (1 + rel_tol) for every t <= T-2.
bool is_increasing_impatience(const DiscountFactor& f, double rel_tol = kDefaultRelTol);

/// Index of the first triple (t, t+1, t+2) that is not log-convex at rel_tol, if any.
std::optional<int> first_log_convexity_failure(const DiscountFactor& f, double rel_tol = kDefaultRelTol);

bool is_stationary(const DiscountFactor& f, double rel_tol = kDefaultRelTol);

double evaluate_stream(const DiscountFactor& f, const Stream& x);

Preference compare_dated_rewards(const DiscountFactor& f, const DatedReward& a, const DatedReward& b);

/// Checks the shift implication (x,t) >= (y,s)  =>  (x,t+r) >= (y,s+r) for r = 1..max_shift.
bool behavioral_di_check(const DiscountFactor& f, double x, double y, int s, int t, int max_shift);

/// Evaluates the compound-interest inequality at principal k, rate r and period t.
///
/// Accepts any gross rate 1 + r > 0. The verdict is computed with k factored out, so it
/// does not depend on k.
bool compound_interest_convexity_holds(const DiscountFactor& f, double k, double r, int t);

/// Both sides of the compound-interest inequality at principal k (split bundle, lump).
std::pair<double, double> compound_interest_sides(const DiscountFactor& f, double k, double r, int t);

/// First certified compound-interest violation, or nullopt when f is decreasing impatience.
///
/// The witness period is the centre of the first non-log-convex triple and the rate is
/// the minimiser r = f(t)/f(t+1) - 1 of the split-minus-lump gap.
std::optional<ConvexityWitness> find_convexity_violation(const DiscountFactor& f);

}  // namespace impatience
