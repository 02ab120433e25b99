#include "impatience/aggregate.hpp"

#include "impatience/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace impatience {

namespace {

constexpr double kParetoDeadBand = 1e-12;

bool close_rel(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

std::vector<double> monotone(std::vector<double> v) {
    for (std::size_t t = 1; t < v.size(); ++t) {
        v[t] = std::min(v[t], v[t - 1]);
    }
    return v;
}

double terminal_ratio(const NormalizedFactor& f) {
    const auto T = f.size() - 1;
    return f[T] / f[T - 1];
}

}  // namespace

NormalizedFactor::NormalizedFactor(std::vector<double> values) : values_(std::move(values)) {
    // Reuse the positivity / monotonicity validation of DiscountFactor.
    DiscountFactor check(values_);
    if (std::abs(values_.front() - 1.0) > 1e-12) {
        throw Error(ErrorCode::ParamOutOfRange, "normalized factor must start at 1");
    }
    values_.front() = 1.0;
}

Profile::Profile(std::vector<NormalizedFactor> members) : members_(std::move(members)) {
    if (members_.empty()) {
        throw Error(ErrorCode::SizeMismatch, "profile must have at least one member");
    }
    for (const auto& m : members_) {
        if (m.horizon() != members_.front().horizon()) {
            throw Error(ErrorCode::HorizonMismatch, "profile members must share a horizon");
        }
    }
}

Weights::Weights(std::vector<double> eta) : eta_(std::move(eta)) {
    if (eta_.empty()) {
        throw Error(ErrorCode::InvalidWeights, "weights must be nonempty");
    }
    double total = 0.0;
    for (double e : eta_) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw Error(ErrorCode::InvalidWeights, "weights must be positive");
        }
        total += e;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidWeights, "weights must sum to 1 (got " + std::to_string(total) + ")");
    }
}

Weights Weights::uniform(std::size_t m) {
    std::vector<double> eta(m, 1.0 / static_cast<double>(m));
    // Absorb the rounding of 1/m into the last weight.
    eta.back() = 1.0 - std::accumulate(eta.begin(), eta.end() - 1, 0.0);
    return Weights(std::move(eta));
}

NormalizedFactor normalize(const DiscountFactor& f) {
    std::vector<double> v(f.vector());
    const double first = v.front();
    for (double& x : v) x /= first;
    return NormalizedFactor(std::move(v));
}

NormalizedFactor geometric_mean(const Profile& profile, const Weights& weights) {
    if (profile.size() != weights.size()) {
        throw Error(ErrorCode::SizeMismatch, "profile has " + std::to_string(profile.size()) +
                                                 " members but " + std::to_string(weights.size()) + " weights");
    }
    std::vector<double> out(profile[0].size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        double log_value = 0.0;
        for (std::size_t i = 0; i < profile.size(); ++i) {
            log_value += weights[i] * std::log(profile[i][t]);
        }
        out[t] = std::exp(log_value);
    }
    out.front() = 1.0;
    return NormalizedFactor(monotone(std::move(out)));
}

NormalizedFactor t_shift(const NormalizedFactor& f, int t) {
    if (t < 0 || f.horizon() - t < 2) {
        throw Error(ErrorCode::HorizonExhausted, "shift " + std::to_string(t) + " leaves fewer than 3 periods");
    }
    const auto start = static_cast<std::size_t>(t);
    std::vector<double> out(f.size() - start);
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = f[start + s] / f[start];
    }
    return NormalizedFactor(std::move(out));
}

Profile t_shift(const Profile& profile, int t) {
    std::vector<NormalizedFactor> members;
    members.reserve(profile.size());
    for (const auto& m : profile.members()) {
        members.push_back(t_shift(m, t));
    }
    return Profile(std::move(members));
}

bool check_time_consistency(const Aggregator& agg, const Profile& profile, int t, double rel_tol) {
    const auto shifted_then_aggregated = agg(t_shift(profile, t));
    const auto aggregated_then_shifted = t_shift(agg(profile), t);
    if (shifted_then_aggregated.size() != aggregated_then_shifted.size()) {
        return false;
    }
    for (std::size_t s = 0; s < shifted_then_aggregated.size(); ++s) {
        if (!close_rel(shifted_then_aggregated[s], aggregated_then_shifted[s], rel_tol)) {
            return false;
        }
    }
    return true;
}

bool check_pareto_dated(const Aggregator& agg, const Profile& profile, int t, int s, double x, double y) {
    const int T = profile.horizon();
    if (t < 0 || s < 0 || t > T || s > T) {
        throw Error(ErrorCode::DateBeyondHorizon, "dates must lie in 0..horizon");
    }
    const auto ut = static_cast<std::size_t>(t);
    const auto us = static_cast<std::size_t>(s);
    bool any_strict = false;
    for (const auto& f : profile.members()) {
        const double lhs = f[ut] * x;
        const double rhs = f[us] * y;
        const double band = kParetoDeadBand * std::max(std::abs(lhs), std::abs(rhs));
        if (lhs - rhs < -band) {
            return true;  // members disagree; nothing to check
        }
        any_strict = any_strict || (lhs - rhs > band);
    }
    const auto social = agg(profile);
    const double lhs = social[ut] * x;
    const double rhs = social[us] * y;
    if (any_strict) {
        return lhs > rhs;
    }
    return lhs - rhs >= -kParetoDeadBand * std::max(std::abs(lhs), std::abs(rhs));
}

bool check_iia(const Aggregator& agg, const Profile& profile, const Profile& other, int t, int s,
               double rel_tol) {
    if (profile.size() != other.size()) {
        throw Error(ErrorCode::SizeMismatch, "IIA compares profiles of equal size");
    }
    if (profile.horizon() != other.horizon()) {
        throw Error(ErrorCode::HorizonMismatch, "IIA compares profiles of equal horizon");
    }
    if (t < 0 || s < 0 || t > profile.horizon() || s > profile.horizon()) {
        throw Error(ErrorCode::DateBeyondHorizon, "dates must lie in 0..horizon");
    }
    const auto ut = static_cast<std::size_t>(t);
    const auto us = static_cast<std::size_t>(s);
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!close_rel(profile[i][ut] / profile[i][us], other[i][ut] / other[i][us], rel_tol)) {
            return true;  // premise fails
        }
    }
    const auto a = agg(profile);
    const auto b = agg(other);
    return close_rel(a[ut] / a[us], b[ut] / b[us], rel_tol);
}

bool summability_check(const NormalizedFactor& f) {
    return terminal_ratio(f) <= 1.0 - 1e-6;
}

Profile multiply(const Profile& a, const Profile& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::SizeMismatch, "profiles differ in size");
    }
    if (a.horizon() != b.horizon()) {
        throw Error(ErrorCode::HorizonMismatch, "profiles differ in horizon");
    }
    std::vector<NormalizedFactor> members;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<double> v(a[i].size());
        for (std::size_t t = 0; t < v.size(); ++t) v[t] = a[i][t] * b[i][t];
        members.emplace_back(monotone(std::move(v)));
    }
    return Profile(std::move(members));
}

Aggregator make_geometric_mean(Weights weights) {
    return [weights = std::move(weights)](const Profile& p) { return geometric_mean(p, weights); };
}

Aggregator make_constant_aggregator(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw Error(ErrorCode::ParamOutOfRange, "constant aggregator needs beta in (0, 1)");
    }
    return [beta](const Profile& p) {
        std::vector<double> v(p[0].size());
        for (std::size_t t = 0; t < v.size(); ++t) v[t] = std::pow(beta, static_cast<double>(t));
        return NormalizedFactor(std::move(v));
    };
}

Aggregator make_arithmetic_mean() {
    return [](const Profile& p) {
        std::vector<double> v(p[0].size(), 0.0);
        for (const auto& f : p.members()) {
            for (std::size_t t = 0; t < v.size(); ++t) v[t] += f[t];
        }
        for (double& x : v) x /= static_cast<double>(p.size());
        v.front() = 1.0;
        return NormalizedFactor(monotone(std::move(v)));
    };
}

Aggregator make_tail_dependent_aggregator(Weights when_first_vanishes, Weights otherwise) {
    if (when_first_vanishes.size() != otherwise.size() || when_first_vanishes.size() < 2) {
        throw Error(ErrorCode::SizeMismatch, "tail-dependent aggregator needs two weight vectors for m >= 2");
    }
    return [a = std::move(when_first_vanishes), b = std::move(otherwise)](const Profile& p) {
        if (p.size() != a.size()) {
            throw Error(ErrorCode::SizeMismatch, "profile size does not match the aggregator");
        }
        const bool first_vanishes = terminal_ratio(p[0]) < terminal_ratio(p[1]);
        return geometric_mean(p, first_vanishes ? a : b);
    };
}

std::vector<double> fit_geometric_weights(const Profile& profile, const NormalizedFactor& target) {
    if (target.horizon() != profile.horizon()) {
        throw Error(ErrorCode::HorizonMismatch, "target horizon differs from the profile");
    }
    const auto rows = static_cast<Eigen::Index>(target.size() - 1);
    const auto cols = static_cast<Eigen::Index>(profile.size());
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r + 1);
        for (Eigen::Index c = 0; c < cols; ++c) {
            design(r, c) = std::log(profile[static_cast<std::size_t>(c)][t]);
        }
        rhs(r) = std::log(target[t]);
    }
    const Eigen::VectorXd eta = design.colPivHouseholderQr().solve(rhs);
    return {eta.data(), eta.data() + eta.size()};
}

Profile reverse_tails(const Profile& profile) {
    const auto m = profile.size();
    const auto T = static_cast<std::size_t>(profile.horizon());
    std::vector<NormalizedFactor> members;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> v(profile[i].vector());
        v[T] = v[T - 1] * terminal_ratio(profile[m - 1 - i]);
        members.emplace_back(std::move(v));
    }
    return Profile(std::move(members));
}

AxiomReport run_axiom_suite(const Aggregator& agg, const Profile& profile, double rel_tol) {
    AxiomReport report;
    const int T = profile.horizon();
    for (int t = 0; t + 2 <= T; ++t) {
        report.time_consistency = check_time_consistency(agg, profile, t, rel_tol) && report.time_consistency;
        ++report.time_consistency_checks;
    }
    for (int t = 0; t <= T; ++t) {
        for (int s = 0; s <= T; ++s) {
            if (t == s) continue;
            double min_ratio = INFINITY;
            for (const auto& f : profile.members()) {
                min_ratio = std::min(min_ratio, f[static_cast<std::size_t>(t)] / f[static_cast<std::size_t>(s)]);
            }
            for (double shrink : {1.0, 0.999}) {
                report.pareto = check_pareto_dated(agg, profile, t, s, 1.0, min_ratio * shrink) && report.pareto;
                ++report.pareto_checks;
            }
        }
    }
    const auto partner = reverse_tails(profile);
    for (int t = 1; t < T; ++t) {
        for (int s = 1; s < T; ++s) {
            if (t == s) continue;
            report.iia = check_iia(agg, profile, partner, t, s, rel_tol) && report.iia;
            ++report.iia_checks;
        }
    }
    return report;
}

}  // namespace impatience
