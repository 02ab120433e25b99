#pragma once

#include "impatience/discount.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace impatience {

/// Weakly decreasing positive sequence with f(0) = 1.
class NormalizedFactor {
public:
    /// Throws NonPositiveValue / NotDecreasing / TooShort, or ParamOutOfRange when f(0) != 1.
    explicit NormalizedFactor(std::vector<double> values);

    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }
    int horizon() const noexcept { return static_cast<int>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t t) const noexcept { return values_[t]; }

    DiscountFactor as_discount_factor() const { return DiscountFactor(values_); }

private:
    std::vector<double> values_;
};

/// Nonempty list of normalized factors over a common horizon.
class Profile {
public:
    explicit Profile(std::vector<NormalizedFactor> members);

    const std::vector<NormalizedFactor>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    int horizon() const noexcept { return members_.front().horizon(); }
    const NormalizedFactor& operator[](std::size_t i) const noexcept { return members_[i]; }

private:
    std::vector<NormalizedFactor> members_;
};

/// Positive weights summing to one (within 1e-12).
class Weights {
public:
    explicit Weights(std::vector<double> eta);

    static Weights uniform(std::size_t m);

    std::span<const double> eta() const noexcept { return eta_; }
    std::size_t size() const noexcept { return eta_.size(); }
    double operator[](std::size_t i) const noexcept { return eta_[i]; }

private:
    std::vector<double> eta_;
};

using Aggregator = std::function<NormalizedFactor(const Profile&)>;

NormalizedFactor normalize(const DiscountFactor& f);

/// prod_i member_i(t)^eta_i
NormalizedFactor geometric_mean(const Profile& profile, const Weights& weights);

/// s -> f(t+s)/f(t); needs at least two periods left after t.
NormalizedFactor t_shift(const NormalizedFactor& f, int t);

Profile t_shift(const Profile& profile, int t);

/// agg(shifted profile) == shift(agg(profile)) pointwise within rel_tol.
bool check_time_consistency(const Aggregator& agg, const Profile& profile, int t, double rel_tol = 1e-10);

/// Unanimous ranking of (x, t) against (y, s) must carry over to the aggregate, strictly when
/// some member is strict. Vacuously true when the members disagree.
bool check_pareto_dated(const Aggregator& agg, const Profile& profile, int t, int s, double x, double y);

/// If every member's ratio f(t)/f(s) is the same in both profiles, so must be the aggregate's.
bool check_iia(const Aggregator& agg, const Profile& profile, const Profile& other, int t, int s,
               double rel_tol = 1e-10);

/// Finite-horizon summability certificate: f(T)/f(T-1) <= 1 - 1e-6.
bool summability_check(const NormalizedFactor& f);

/// Memberwise product of two profiles of equal shape.
Profile multiply(const Profile& a, const Profile& b);

Aggregator make_geometric_mean(Weights weights);
/// Ignores the profile and returns (1, beta, beta^2, ...).
Aggregator make_constant_aggregator(double beta);
/// (1/m) sum_i f_i(t)
Aggregator make_arithmetic_mean();
/// Geometric mean with `when_first_vanishes` if member 0's terminal impatience ratio is below
/// member 1's (member 0 is negligible in the tail), otherwise with `otherwise`.
Aggregator make_tail_dependent_aggregator(Weights when_first_vanishes, Weights otherwise);

/// Least-squares estimate of geometric weights reproducing `target` from the profile in logs.
/// Diagnostic only; the result is not projected onto the simplex.
std::vector<double> fit_geometric_weights(const Profile& profile, const NormalizedFactor& target);

/// Outcome of running the three axiom checks on one witness.
struct AxiomReport {
    bool pareto = true;
    bool iia = true;
    bool time_consistency = true;
    int pareto_checks = 0;
    int iia_checks = 0;
    int time_consistency_checks = 0;

    bool all() const noexcept { return pareto && iia && time_consistency; }
};

/// Partner profile for IIA: identical except at the final date, where member terminal
/// impatience ratios are handed out in reverse order. Dates below the horizon are untouched.
Profile reverse_tails(const Profile& profile);

/// Runs every axiom check the profile supports:
///  - time consistency for each shift t = 0..T-2;
///  - Pareto for each ordered pair t != s, with y/x at the least patient member's ratio
///    (weak unanimity) and 0.1% below it (strict unanimity);
///  - IIA for each pair 0 < t, s < T against reverse_tails(profile).
AxiomReport run_axiom_suite(const Aggregator& agg, const Profile& profile, double rel_tol = 1e-10);

}  // namespace impatience
