#include "impatience/discount.hpp"

#include "impatience/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace impatience {

namespace {

std::string at_index(std::size_t t) { return " at t=" + std::to_string(t); }

}  // namespace

DiscountFactor::DiscountFactor(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 3) {
        throw Error(ErrorCode::TooShort, "a discount factor needs at least 3 values (horizon >= 2)");
    }
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (!(values_[t] > 0.0) || !std::isfinite(values_[t])) {
            throw Error(ErrorCode::NonPositiveValue, "value must be positive and finite" + at_index(t));
        }
        if (values_[t] < kMinValue) {
            throw Error(ErrorCode::NonPositiveValue, "value below 1e-300" + at_index(t));
        }
        if (t > 0 && values_[t] > values_[t - 1]) {
            throw Error(ErrorCode::NotDecreasing, "f(t) > f(t-1)" + at_index(t));
        }
    }
}

double DiscountFactor::at(int t) const {
    if (t < 0 || t > horizon()) {
        throw Error(ErrorCode::DateBeyondHorizon, "date " + std::to_string(t) + " outside 0.." +
                                                      std::to_string(horizon()));
    }
    return values_[static_cast<std::size_t>(t)];
}

Stream::Stream(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t t = 0; t < values_.size(); ++t) {
        if (!(values_[t] >= 0.0) || !std::isfinite(values_[t])) {
            throw Error(ErrorCode::ParamOutOfRange, "stream value must be nonnegative" + at_index(t));
        }
    }
}

DiscountFactor make_discount_factor(std::vector<double> values) {
    return DiscountFactor(std::move(values));
}

DiscountFactor from_generalized_beta_delta(double beta, double delta, int switch_period, int horizon) {
    if (!(beta > 0.0 && beta <= 1.0) || !(delta > 0.0 && delta <= 1.0)) {
        throw Error(ErrorCode::ParamOutOfRange, "beta and delta must lie in (0, 1]");
    }
    if (horizon < 2) {
        throw Error(ErrorCode::TooShort, "horizon must be at least 2");
    }
    if (switch_period < 1 || switch_period > horizon) {
        throw Error(ErrorCode::ParamOutOfRange, "switch period must lie in 1..horizon");
    }
    std::vector<double> values(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t) {
        values[static_cast<std::size_t>(t)] =
            std::pow(beta, std::min(switch_period, t)) * std::pow(delta, t);
    }
    return DiscountFactor(std::move(values));
}

std::vector<double> impatience_ratios(const DiscountFactor& f) {
    std::vector<double> ratios(f.size() - 1);
    for (std::size_t t = 0; t + 1 < f.size(); ++t) {
        ratios[t] = f[t + 1] / f[t];
    }
    return ratios;
}

std::optional<int> first_log_convexity_failure(const DiscountFactor& f, double rel_tol) {
    for (std::size_t t = 0; t + 2 < f.size(); ++t) {
        if (f[t + 1] * f[t + 1] > f[t] * f[t + 2] * (1.0 + rel_tol)) {
            return static_cast<int>(t);
        }
    }
    return std::nullopt;
}

bool is_decreasing_impatience(const DiscountFactor& f, double rel_tol) {
    return !first_log_convexity_failure(f, rel_tol).has_value();
}

bool is_increasing_impatience(const DiscountFactor& f, double rel_tol) {
    for (std::size_t t = 0; t + 2 < f.size(); ++t) {
        if (f[t + 1] * f[t + 1] < f[t] * f[t + 2] / (1.0 + rel_tol)) {
            return false;
        }
    }
    return true;
}

bool is_stationary(const DiscountFactor& f, double rel_tol) {
    const auto ratios = impatience_ratios(f);
    return std::all_of(ratios.begin(), ratios.end(), [&](double r) {
        return std::abs(r - ratios.front()) <= rel_tol * std::max(r, ratios.front());
    });
}

double evaluate_stream(const DiscountFactor& f, const Stream& x) {
    if (x.horizon() != f.horizon()) {
        throw Error(ErrorCode::HorizonMismatch, "stream horizon " + std::to_string(x.horizon()) +
                                                    " != factor horizon " + std::to_string(f.horizon()));
    }
    double total = 0.0;
    for (std::size_t t = 0; t < f.size(); ++t) {
        total += f[t] * x.values()[t];
    }
    return total;
}

Preference compare_dated_rewards(const DiscountFactor& f, const DatedReward& a, const DatedReward& b) {
    if (a.amount < 0.0 || b.amount < 0.0) {
        throw Error(ErrorCode::ParamOutOfRange, "dated reward amounts must be nonnegative");
    }
    const double diff = a.amount * f.at(a.date) - b.amount * f.at(b.date);
    if (diff > 0.0) return Preference::APreferred;
    if (diff < 0.0) return Preference::BPreferred;
    return Preference::Indifferent;
}

namespace {

// Weak preference between present values; relative dead-band absorbs rounding in ties.
bool weakly_prefers(double lhs_value, double rhs_value) {
    return lhs_value >= rhs_value * (1.0 - 1e-12);
}

}  // namespace

bool behavioral_di_check(const DiscountFactor& f, double x, double y, int s, int t, int max_shift) {
    if (!(x > y) || !(y > 0.0) || s >= t) {
        throw Error(ErrorCode::BadPremiseOrder, "require x > y > 0 and s < t");
    }
    if (s < 0 || max_shift < 0 || t + max_shift > f.horizon()) {
        throw Error(ErrorCode::PeriodOutOfRange, "t + max_shift must not exceed the horizon");
    }
    if (!weakly_prefers(x * f.at(t), y * f.at(s))) {
        return true;
    }
    for (int r = 1; r <= max_shift; ++r) {
        if (!weakly_prefers(x * f.at(t + r), y * f.at(s + r))) {
            return false;
        }
    }
    return true;
}

namespace {

void check_axiom_args(const DiscountFactor& f, double k, double r, int t) {
    if (!(k > 0.0)) {
        throw Error(ErrorCode::ParamOutOfRange, "principal k must be positive");
    }
    if (!(r > -1.0)) {
        throw Error(ErrorCode::ParamOutOfRange, "gross rate 1 + r must be positive");
    }
    if (t < 1 || t > f.horizon() - 1) {
        throw Error(ErrorCode::PeriodOutOfRange,
                    "period " + std::to_string(t) + " outside 1.." + std::to_string(f.horizon() - 1));
    }
}

}  // namespace

std::pair<double, double> compound_interest_sides(const DiscountFactor& f, double k, double r, int t) {
    check_axiom_args(f, k, r, t);
    const double gross = 1.0 + r;
    const double base = std::pow(gross, t - 1);
    const auto u = static_cast<std::size_t>(t);
    const double split = 0.5 * k * base * (f[u - 1] + gross * gross * f[u + 1]);
    const double lump = k * base * gross * f[u];
    return {split, lump};
}

bool compound_interest_convexity_holds(const DiscountFactor& f, double k, double r, int t) {
    check_axiom_args(f, k, r, t);
    // Divide out k * (1+r)^(t-1); the verdict only depends on the scaled triple.
    const double gross = 1.0 + r;
    const auto u = static_cast<std::size_t>(t);
    const double early = 0.5 * f[u - 1];
    const double late = 0.5 * gross * gross * f[u + 1];
    const double lump = gross * f[u];
    const double slack = kAxiomSlack * std::max({early, late, lump});
    return early + late >= lump - slack;
}

std::optional<ConvexityWitness> find_convexity_violation(const DiscountFactor& f) {
    for (std::size_t j = 0; j + 2 < f.size(); ++j) {
        if (!(f[j + 1] * f[j + 1] > f[j] * f[j + 2])) {
            continue;
        }
        const int period = static_cast<int>(j) + 1;
        const double rate = f[j + 1] / f[j + 2] - 1.0;
        if (compound_interest_convexity_holds(f, 1.0, rate, period)) {
            // Violation smaller than the axiom's rounding slack; not certifiable.
            continue;
        }
        const auto [lhs, rhs] = compound_interest_sides(f, 1.0, rate, period);
        return ConvexityWitness{period, rate, lhs, rhs};
    }
    return std::nullopt;
}

}  // namespace impatience
