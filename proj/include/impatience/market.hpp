#pragma once

#include "impatience/discount.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace impatience {

/// Agents whose discount rates differ by less than this are merged before solving.
inline constexpr double kMergeDeltaGap = 1e-12;

struct ExponentialAgent {
    double delta = 0.5;   ///< per-period discount rate, in (0, 1)
    double wealth = 1.0;  ///< income, > 0
};

/// Parimutuel economy: exponential discounters, unit supply in each period 0..horizon.
class Economy {
public:
    Economy(std::vector<ExponentialAgent> agents, int horizon);

    const std::vector<ExponentialAgent>& agents() const noexcept { return agents_; }
    int horizon() const noexcept { return horizon_; }
    std::size_t size() const noexcept { return agents_.size(); }
    std::size_t periods() const noexcept { return static_cast<std::size_t>(horizon_) + 1; }
    double total_wealth() const noexcept;

private:
    std::vector<ExponentialAgent> agents_;
    int horizon_;
};

/// x(i, t): share of period t's unit supply consumed by agent i.
using Allocation = Eigen::MatrixXd;

struct EquilibriumResult {
    std::vector<double> prices;
    Allocation allocation;
    /// Join weights against the probability measures (1-d) d^t / (1 - d^(T+1)).
    std::vector<double> join_weights;
    /// w_i / u_i(x_i); dominates prices against the raw d^t with equality on supports.
    std::vector<double> utility_weights;
    std::vector<std::vector<int>> supports;
    int iterations = 0;
    double residual = 0.0;
};

/// log f(t) >= intercept - slope * t, with equality at `anchor`.
struct SupportingLine {
    int anchor = 0;
    double intercept = 0.0;
    double slope = 0.0;
};

struct WeightedExponential {
    double alpha = 1.0;
    double delta = 0.5;
};

struct Violation {
    enum class Kind { Budget, Optimality, Feasibility, Price };
    Kind kind = Kind::Budget;
    int agent = -1;
    int period = -1;
    double amount = 0.0;
};

std::string to_string(Violation::Kind kind);

struct VerificationReport {
    bool passed = true;
    double max_budget_error = 0.0;
    double max_optimality_gap = 0.0;  ///< relative to the agent's best bang-per-buck
    double max_supply_error = 0.0;
    std::vector<Violation> violations;

    /// Largest of the three error measures.
    double residual() const noexcept;
};

struct SolverOptions {
    double tol = 1e-10;
    int max_iters = 1'000'000;
    /// 0 starts from uniform bids; k > 0 from a deterministic pseudo-random bid profile.
    int start = 0;
};

/// p(t) = max_i alpha_i * delta_i^t. Throws AllWeightsZero if no alpha is positive.
std::vector<double> envelope_prices(std::span<const WeightedExponential> pairs, int horizon);

/// Index of the pair attaining the envelope at each t (lowest index on ties).
std::vector<int> envelope_leaders(std::span<const WeightedExponential> pairs, int horizon);

/// One supporting line of log(f / f(0)) per period.
std::vector<SupportingLine> supporting_lines(const DiscountFactor& f);

/// Economy with one agent per period whose equilibrium prices are f / f(0), plus that equilibrium.
std::pair<Economy, EquilibriumResult> synthesize_economy(const DiscountFactor& f);

VerificationReport verify_equilibrium(const Economy& e, std::span<const double> prices, const Allocation& x,
                                      double tol);

/// Eisenberg-Gale equilibrium by proportional-response dynamics, finished by an exact
/// solve on the detected consumption supports. Prices sum to the total wealth.
EquilibriumResult solve_equilibrium(const Economy& e, const SolverOptions& options = {});

/// alpha_i = p(E_i) / dhat_i(E_i) over each agent's consumption support E_i.
std::vector<double> join_decomposition(std::span<const double> prices, const Economy& e, const Allocation& x);

/// Largest sup-norm gap between p and max_i alpha_i dhat_i, relative to max p.
double envelope_residual(std::span<const double> prices, const Economy& e, std::span<const double> join_weights);

/// (1 - d) d^t / (1 - d^(T+1)), the exponential probability measure truncated to 0..T.
double exponential_measure(double delta, int t, int horizon);

/// Max pairwise sup-distance between normalized equilibrium prices from n_starts starts.
double uniqueness_probe(const Economy& e, int n_starts, double tol);

}  // namespace impatience
