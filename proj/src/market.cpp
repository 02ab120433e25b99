#include "impatience/market.hpp"

#include "impatience/error.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace impatience {

Economy::Economy(std::vector<ExponentialAgent> agents, int horizon)
    : agents_(std::move(agents)), horizon_(horizon) {
    if (agents_.empty()) {
        throw Error(ErrorCode::InvalidEconomy, "economy needs at least one agent");
    }
    if (horizon_ < 2) {
        throw Error(ErrorCode::InvalidEconomy, "horizon must be at least 2");
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        const auto& a = agents_[i];
        if (!(a.delta > 0.0 && a.delta < 1.0)) {
            throw Error(ErrorCode::InvalidEconomy, "agent " + std::to_string(i) + ": delta must lie in (0, 1)");
        }
        if (!(a.wealth > 0.0) || !std::isfinite(a.wealth)) {
            throw Error(ErrorCode::InvalidEconomy, "agent " + std::to_string(i) + ": wealth must be positive");
        }
    }
}

double Economy::total_wealth() const noexcept {
    double total = 0.0;
    for (const auto& a : agents_) total += a.wealth;
    return total;
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::Budget: return "budget";
        case Violation::Kind::Optimality: return "optimality";
        case Violation::Kind::Feasibility: return "feasibility";
        case Violation::Kind::Price: return "price";
    }
    return "unknown";
}

double VerificationReport::residual() const noexcept {
    return std::max({max_budget_error, max_optimality_gap, max_supply_error});
}

double exponential_measure(double delta, int t, int horizon) {
    return (1.0 - delta) * std::pow(delta, t) / (1.0 - std::pow(delta, horizon + 1));
}

namespace {

// powers(i, t) = delta_i^t
Eigen::MatrixXd discount_powers(const Economy& e) {
    Eigen::MatrixXd powers(static_cast<Eigen::Index>(e.size()), static_cast<Eigen::Index>(e.periods()));
    for (Eigen::Index i = 0; i < powers.rows(); ++i) {
        const double d = e.agents()[static_cast<std::size_t>(i)].delta;
        for (Eigen::Index t = 0; t < powers.cols(); ++t) {
            powers(i, t) = std::pow(d, static_cast<double>(t));
        }
    }
    return powers;
}

std::vector<std::vector<int>> supports_of(const Allocation& x) {
    std::vector<std::vector<int>> supports(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index t = 0; t < x.cols(); ++t) {
            if (x(i, t) > 0.0) supports[static_cast<std::size_t>(i)].push_back(static_cast<int>(t));
        }
    }
    return supports;
}

}  // namespace

std::vector<double> envelope_prices(std::span<const WeightedExponential> pairs, int horizon) {
    const auto leaders = envelope_leaders(pairs, horizon);
    std::vector<double> prices(leaders.size());
    for (std::size_t t = 0; t < prices.size(); ++t) {
        const auto& w = pairs[static_cast<std::size_t>(leaders[t])];
        prices[t] = w.alpha * std::pow(w.delta, static_cast<double>(t));
    }
    return prices;
}

std::vector<int> envelope_leaders(std::span<const WeightedExponential> pairs, int horizon) {
    if (horizon < 0) {
        throw Error(ErrorCode::ParamOutOfRange, "horizon must be nonnegative");
    }
    bool any_positive = false;
    for (const auto& w : pairs) {
        if (w.alpha < 0.0 || !(w.delta > 0.0 && w.delta < 1.0)) {
            throw Error(ErrorCode::ParamOutOfRange, "need alpha >= 0 and delta in (0, 1)");
        }
        any_positive = any_positive || w.alpha > 0.0;
    }
    if (!any_positive) {
        throw Error(ErrorCode::AllWeightsZero, "at least one alpha must be positive");
    }
    std::vector<int> leaders(static_cast<std::size_t>(horizon) + 1);
    for (int t = 0; t <= horizon; ++t) {
        double best = -1.0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double v = pairs[i].alpha * std::pow(pairs[i].delta, static_cast<double>(t));
            if (v > best) {
                best = v;
                leaders[static_cast<std::size_t>(t)] = static_cast<int>(i);
            }
        }
    }
    return leaders;
}

std::vector<SupportingLine> supporting_lines(const DiscountFactor& f) {
    for (std::size_t t = 0; t + 1 < f.size(); ++t) {
        if (!(f[t + 1] < f[t])) {
            throw Error(ErrorCode::NotStrictlyDecreasing, "f(t+1) >= f(t) at t=" + std::to_string(t));
        }
    }
    if (!is_decreasing_impatience(f)) {
        throw Error(ErrorCode::NotDecreasingImpatience, "supporting lines need a log-convex factor");
    }
    std::vector<double> logf(f.size());
    for (std::size_t t = 0; t < f.size(); ++t) logf[t] = std::log(f[t] / f[0]);
    logf[0] = 0.0;

    std::vector<SupportingLine> lines;
    lines.reserve(f.size());
    for (std::size_t anchor = 0; anchor < f.size(); ++anchor) {
        const std::size_t right = std::max<std::size_t>(anchor, 1);
        const double slope = logf[right - 1] - logf[right];
        const double intercept = logf[anchor] + static_cast<double>(anchor) * slope;
        for (std::size_t t = 0; t < f.size(); ++t) {
            const double line = intercept - slope * static_cast<double>(t);
            if (line > logf[t] + 1e-12 * (1.0 + std::abs(logf[t]))) {
                throw Error(ErrorCode::NotDecreasingImpatience,
                            "line anchored at " + std::to_string(anchor) + " cuts log f at t=" + std::to_string(t));
            }
        }
        lines.push_back({static_cast<int>(anchor), intercept, slope});
    }
    return lines;
}

std::vector<double> join_decomposition(std::span<const double> prices, const Economy& e, const Allocation& x) {
    if (prices.size() != e.periods() || static_cast<std::size_t>(x.rows()) != e.size() ||
        static_cast<std::size_t>(x.cols()) != e.periods()) {
        throw Error(ErrorCode::DimensionMismatch, "prices/allocation do not match the economy");
    }
    std::vector<double> alpha(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        double price_mass = 0.0;
        double measure_mass = 0.0;
        for (std::size_t t = 0; t < e.periods(); ++t) {
            if (x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) > 0.0) {
                price_mass += prices[t];
                measure_mass += exponential_measure(e.agents()[i].delta, static_cast<int>(t), e.horizon());
            }
        }
        if (measure_mass == 0.0) {
            throw Error(ErrorCode::EmptySupport, "agent " + std::to_string(i) + " consumes nothing");
        }
        alpha[i] = price_mass / measure_mass;
    }
    return alpha;
}

double envelope_residual(std::span<const double> prices, const Economy& e, std::span<const double> join_weights) {
    if (prices.size() != e.periods() || join_weights.size() != e.size()) {
        throw Error(ErrorCode::DimensionMismatch, "prices/weights do not match the economy");
    }
    const double scale = *std::max_element(prices.begin(), prices.end());
    double worst = 0.0;
    for (std::size_t t = 0; t < prices.size(); ++t) {
        double envelope = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            envelope = std::max(envelope, join_weights[i] * exponential_measure(e.agents()[i].delta,
                                                                                static_cast<int>(t), e.horizon()));
        }
        worst = std::max(worst, std::abs(prices[t] - envelope) / scale);
    }
    return worst;
}

VerificationReport verify_equilibrium(const Economy& e, std::span<const double> prices, const Allocation& x,
                                      double tol) {
    if (prices.size() != e.periods() || static_cast<std::size_t>(x.rows()) != e.size() ||
        static_cast<std::size_t>(x.cols()) != e.periods()) {
        throw Error(ErrorCode::DimensionMismatch, "prices/allocation do not match the economy");
    }
    VerificationReport report;
    auto flag = [&](Violation::Kind kind, int agent, int period, double amount) {
        report.passed = false;
        report.violations.push_back({kind, agent, period, amount});
    };

    for (std::size_t t = 0; t < prices.size(); ++t) {
        if (!(prices[t] > 0.0)) {
            flag(Violation::Kind::Price, -1, static_cast<int>(t), prices[t]);
        }
    }
    if (!report.passed) {
        report.max_optimality_gap = std::numeric_limits<double>::infinity();
        return report;
    }

    const double supply_tol = std::max(tol, 1e-12);
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
        double supply = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            if (x(i, t) < -1e-12) {
                flag(Violation::Kind::Feasibility, static_cast<int>(i), static_cast<int>(t), x(i, t));
            }
            supply += x(i, t);
        }
        const double err = std::abs(supply - 1.0);
        report.max_supply_error = std::max(report.max_supply_error, err);
        if (err > supply_tol) {
            flag(Violation::Kind::Feasibility, -1, static_cast<int>(t), supply - 1.0);
        }
    }

    const auto powers = discount_powers(e);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        double spend = 0.0;
        double best = 0.0;
        for (std::size_t t = 0; t < prices.size(); ++t) {
            const auto col = static_cast<Eigen::Index>(t);
            spend += prices[t] * x(row, col);
            best = std::max(best, powers(row, col) / prices[t]);
        }
        const double budget_err = std::abs(spend - e.agents()[i].wealth);
        report.max_budget_error = std::max(report.max_budget_error, budget_err);
        if (budget_err > tol) {
            flag(Violation::Kind::Budget, static_cast<int>(i), -1, spend - e.agents()[i].wealth);
        }
        for (std::size_t t = 0; t < prices.size(); ++t) {
            const auto col = static_cast<Eigen::Index>(t);
            if (!(x(row, col) > 0.0)) continue;
            const double gap = (best - powers(row, col) / prices[t]) / best;
            report.max_optimality_gap = std::max(report.max_optimality_gap, gap);
            if (gap > tol) {
                flag(Violation::Kind::Optimality, static_cast<int>(i), static_cast<int>(t), gap);
            }
        }
    }
    return report;
}

std::pair<Economy, EquilibriumResult> synthesize_economy(const DiscountFactor& f) {
    const auto lines = supporting_lines(f);
    EquilibriumResult result;
    result.prices.resize(f.size());
    for (std::size_t t = 0; t < f.size(); ++t) result.prices[t] = f[t] / f[0];
    result.prices[0] = 1.0;

    std::vector<ExponentialAgent> agents;
    agents.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        agents.push_back({std::exp(-lines[i].slope), result.prices[i]});
    }
    Economy economy(std::move(agents), f.horizon());

    const auto n = static_cast<Eigen::Index>(f.size());
    result.allocation = Allocation::Identity(n, n);
    result.supports = supports_of(result.allocation);
    result.join_weights = join_decomposition(result.prices, economy, result.allocation);
    result.utility_weights.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        // u_i(x_i) = delta_i^i
        result.utility_weights[i] = economy.agents()[i].wealth / std::pow(economy.agents()[i].delta, static_cast<double>(i));
    }
    result.residual = verify_equilibrium(economy, result.prices, result.allocation, 1.0).residual();
    return {std::move(economy), std::move(result)};
}

namespace {

struct MergedEconomy {
    Economy economy;
    std::vector<std::size_t> group_of;  ///< original agent -> merged agent
};

MergedEconomy merge_close_agents(const Economy& e) {
    std::vector<std::size_t> order(e.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return e.agents()[a].delta < e.agents()[b].delta; });
    std::vector<ExponentialAgent> merged;
    std::vector<std::size_t> group_of(e.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& a = e.agents()[order[k]];
        if (k > 0 && a.delta - e.agents()[order[k - 1]].delta < kMergeDeltaGap) {
            merged.back().wealth += a.wealth;
        } else {
            merged.push_back(a);
        }
        group_of[order[k]] = merged.size() - 1;
    }
    return {Economy(std::move(merged), e.horizon()), std::move(group_of)};
}

// Deterministic uniform in [0, 1) from a 64-bit engine, independent of the standard
// library's distribution implementation.
double unit_uniform(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd initial_bids(const Economy& e, int start) {
    const auto n = static_cast<Eigen::Index>(e.size());
    const auto periods = static_cast<Eigen::Index>(e.periods());
    Eigen::MatrixXd bids(n, periods);
    std::mt19937_64 engine(static_cast<std::uint64_t>(start));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index t = 0; t < periods; ++t) {
            bids(i, t) = start == 0 ? 1.0 : 0.05 + unit_uniform(engine);
        }
        bids.row(i) *= e.agents()[static_cast<std::size_t>(i)].wealth / bids.row(i).sum();
    }
    return bids;
}

struct Candidate {
    std::vector<double> prices;
    Allocation allocation;
};

// Exact equilibrium for given consumption supports: prices follow alpha_i delta_i^t on each
// support, ties link agents sharing a period, and the allocation is peeled off the
// (forest-shaped) support graph leaf by leaf.
std::optional<Candidate> solve_on_supports(const Economy& e, const Eigen::MatrixXd& powers,
                                           const std::vector<std::vector<int>>& supports) {
    const std::size_t n = e.size();
    const std::size_t periods = e.periods();
    std::vector<std::vector<std::size_t>> owners(periods);
    std::size_t edges = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (supports[i].empty()) return std::nullopt;
        for (int t : supports[i]) {
            owners[static_cast<std::size_t>(t)].push_back(i);
            ++edges;
        }
    }
    for (const auto& o : owners) {
        if (o.empty()) return std::nullopt;
    }

    // Propagate relative alphas through each connected component.
    std::vector<double> alpha(n, 0.0);
    std::vector<int> component(n, -1);
    std::vector<double> prices(periods, 0.0);
    std::vector<int> period_component(periods, -1);
    int components = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (component[root] >= 0) continue;
        const int c = components++;
        component[root] = c;
        alpha[root] = 1.0;
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            const std::size_t i = queue.front();
            queue.pop_front();
            for (int t : supports[i]) {
                const auto ut = static_cast<std::size_t>(t);
                const double p = alpha[i] * powers(static_cast<Eigen::Index>(i), t);
                if (period_component[ut] < 0) {
                    period_component[ut] = c;
                    prices[ut] = p;
                } else if (std::abs(prices[ut] - p) > 1e-9 * p) {
                    return std::nullopt;  // inconsistent cycle
                }
                for (std::size_t j : owners[ut]) {
                    if (component[j] >= 0) continue;
                    component[j] = c;
                    alpha[j] = prices[ut] / powers(static_cast<Eigen::Index>(j), t);
                    queue.push_back(j);
                }
            }
        }
    }
    // A forest has exactly (nodes - components) edges.
    if (edges != n + periods - static_cast<std::size_t>(components)) {
        return std::nullopt;
    }

    std::vector<double> wealth(static_cast<std::size_t>(components), 0.0);
    std::vector<double> spend(static_cast<std::size_t>(components), 0.0);
    for (std::size_t i = 0; i < n; ++i) wealth[static_cast<std::size_t>(component[i])] += e.agents()[i].wealth;
    for (std::size_t t = 0; t < periods; ++t) spend[static_cast<std::size_t>(period_component[t])] += prices[t];
    for (std::size_t t = 0; t < periods; ++t) {
        const auto c = static_cast<std::size_t>(period_component[t]);
        prices[t] *= wealth[c] / spend[c];
    }

    // Leaf peeling. Nodes 0..n-1 are agents, n..n+periods-1 are periods.
    Allocation x = Allocation::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(periods));
    std::vector<double> budget(n);
    for (std::size_t i = 0; i < n; ++i) budget[i] = e.agents()[i].wealth;
    std::vector<double> supply(periods, 1.0);
    std::vector<std::vector<std::size_t>> agent_edges(n), period_edges(periods);
    for (std::size_t i = 0; i < n; ++i) {
        for (int t : supports[i]) agent_edges[i].push_back(static_cast<std::size_t>(t));
    }
    for (std::size_t t = 0; t < periods; ++t) period_edges[t] = owners[t];
    std::vector<std::size_t> agent_degree(n), period_degree(periods);
    for (std::size_t i = 0; i < n; ++i) agent_degree[i] = agent_edges[i].size();
    for (std::size_t t = 0; t < periods; ++t) period_degree[t] = period_edges[t].size();
    std::vector<char> edge_done(n * periods, 0);

    std::deque<std::size_t> leaves;
    for (std::size_t i = 0; i < n; ++i) {
        if (agent_degree[i] == 1) leaves.push_back(i);
    }
    for (std::size_t t = 0; t < periods; ++t) {
        if (period_degree[t] == 1) leaves.push_back(n + t);
    }
    std::size_t assigned = 0;
    while (!leaves.empty()) {
        const std::size_t node = leaves.front();
        leaves.pop_front();
        if (node < n) {
            const std::size_t i = node;
            if (agent_degree[i] != 1) continue;
            const auto it = std::find_if(agent_edges[i].begin(), agent_edges[i].end(),
                                         [&](std::size_t t) { return !edge_done[i * periods + t]; });
            const std::size_t t = *it;
            const double share = budget[i] / prices[t];
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = share;
            budget[i] = 0.0;
            supply[t] -= share;
            edge_done[i * periods + t] = 1;
            agent_degree[i] = 0;
            if (--period_degree[t] == 1) leaves.push_back(n + t);
        } else {
            const std::size_t t = node - n;
            if (period_degree[t] != 1) continue;
            const auto it = std::find_if(period_edges[t].begin(), period_edges[t].end(),
                                         [&](std::size_t i) { return !edge_done[i * periods + t]; });
            const std::size_t i = *it;
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = supply[t];
            budget[i] -= supply[t] * prices[t];
            supply[t] = 0.0;
            edge_done[i * periods + t] = 1;
            period_degree[t] = 0;
            if (--agent_degree[i] == 1) leaves.push_back(i);
        }
        ++assigned;
    }
    if (assigned != edges) return std::nullopt;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index t = 0; t < x.cols(); ++t) {
            if (x(i, t) < -1e-12) return std::nullopt;
            x(i, t) = std::max(x(i, t), 0.0);
        }
    }
    return Candidate{std::move(prices), std::move(x)};
}

std::vector<std::vector<int>> supports_by_bang_per_buck(const Eigen::MatrixXd& powers, const std::vector<double>& prices,
                                                        double band) {
    std::vector<std::vector<int>> supports(static_cast<std::size_t>(powers.rows()));
    for (Eigen::Index i = 0; i < powers.rows(); ++i) {
        double best = 0.0;
        for (Eigen::Index t = 0; t < powers.cols(); ++t) {
            best = std::max(best, powers(i, t) / prices[static_cast<std::size_t>(t)]);
        }
        for (Eigen::Index t = 0; t < powers.cols(); ++t) {
            if (powers(i, t) / prices[static_cast<std::size_t>(t)] >= best * (1.0 - band)) {
                supports[static_cast<std::size_t>(i)].push_back(static_cast<int>(t));
            }
        }
    }
    return supports;
}

std::vector<std::vector<int>> supports_by_share(const Eigen::MatrixXd& bids, const std::vector<double>& prices,
                                                double threshold) {
    std::vector<std::vector<int>> supports(static_cast<std::size_t>(bids.rows()));
    for (Eigen::Index i = 0; i < bids.rows(); ++i) {
        for (Eigen::Index t = 0; t < bids.cols(); ++t) {
            if (bids(i, t) / prices[static_cast<std::size_t>(t)] >= threshold) {
                supports[static_cast<std::size_t>(i)].push_back(static_cast<int>(t));
            }
        }
    }
    return supports;
}

struct Polished {
    Candidate candidate;
    double residual;
};

std::optional<Polished> polish(const Economy& e, const Eigen::MatrixXd& powers, const Eigen::MatrixXd& bids,
                               const std::vector<double>& prices, double tol) {
    std::vector<std::vector<std::vector<int>>> guesses;
    for (double band : {1e-12, 1e-10, 1e-8, 1e-6}) guesses.push_back(supports_by_bang_per_buck(powers, prices, band));
    for (double threshold : {1e-3, 1e-6, 1e-9}) guesses.push_back(supports_by_share(bids, prices, threshold));
    for (const auto& supports : guesses) {
        auto candidate = solve_on_supports(e, powers, supports);
        if (!candidate) continue;
        const auto report = verify_equilibrium(e, candidate->prices, candidate->allocation, tol);
        if (report.passed) {
            return Polished{std::move(*candidate), report.residual()};
        }
    }
    return std::nullopt;
}

}  // namespace

EquilibriumResult solve_equilibrium(const Economy& e, const SolverOptions& options) {
    if (!(options.tol > 0.0) || options.max_iters < 1) {
        throw Error(ErrorCode::ParamOutOfRange, "solver needs tol > 0 and max_iters >= 1");
    }
    const auto merged = merge_close_agents(e);
    const Economy& m = merged.economy;
    const auto powers = discount_powers(m);
    const auto n = powers.rows();
    const auto periods = powers.cols();

    Eigen::MatrixXd bids = initial_bids(m, options.start);
    std::vector<double> prices(static_cast<std::size_t>(periods));
    auto recompute_prices = [&] {
        for (Eigen::Index t = 0; t < periods; ++t) prices[static_cast<std::size_t>(t)] = bids.col(t).sum();
    };
    recompute_prices();

    constexpr int kPolishEvery = 25;
    constexpr double kPolishWhenChangeBelow = 1e-6;
    std::optional<Polished> solution;
    double change = std::numeric_limits<double>::infinity();
    int iteration = 0;
    while (iteration < options.max_iters) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double utility = 0.0;
            for (Eigen::Index t = 0; t < periods; ++t) {
                bids(i, t) = bids(i, t) / prices[static_cast<std::size_t>(t)] * powers(i, t);
                utility += bids(i, t);
            }
            bids.row(i) *= m.agents()[static_cast<std::size_t>(i)].wealth / utility;
        }
        const std::vector<double> previous = prices;
        recompute_prices();
        ++iteration;
        change = 0.0;
        const double scale = *std::max_element(prices.begin(), prices.end());
        for (std::size_t t = 0; t < prices.size(); ++t) {
            change = std::max(change, std::abs(prices[t] - previous[t]) / scale);
        }
        if ((change <= kPolishWhenChangeBelow && iteration % kPolishEvery == 0) || change <= options.tol) {
            solution = polish(m, powers, bids, prices, options.tol);
            if (solution && solution->residual <= options.tol) break;
            solution.reset();
        }
    }
    if (!solution) {
        Allocation raw(n, periods);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index t = 0; t < periods; ++t) raw(i, t) = bids(i, t) / prices[static_cast<std::size_t>(t)];
        }
        const double residual = verify_equilibrium(m, prices, raw, options.tol).residual();
        throw Error(ErrorCode::NoConvergence, "no verified equilibrium after " + std::to_string(iteration) +
                                                  " iterations (price change " + std::to_string(change) +
                                                  ", residual " + std::to_string(residual) + ")");
    }

    // Undo the merge: members of a merged group split its shares in proportion to wealth.
    EquilibriumResult result;
    result.prices = std::move(solution->candidate.prices);
    result.allocation = Allocation::Zero(static_cast<Eigen::Index>(e.size()), periods);
    for (std::size_t i = 0; i < e.size(); ++i) {
        const std::size_t g = merged.group_of[i];
        const double fraction = e.agents()[i].wealth / m.agents()[g].wealth;
        result.allocation.row(static_cast<Eigen::Index>(i)) =
            fraction * solution->candidate.allocation.row(static_cast<Eigen::Index>(g));
    }
    result.supports = supports_of(result.allocation);
    result.join_weights = join_decomposition(result.prices, e, result.allocation);
    const auto full_powers = discount_powers(e);
    result.utility_weights.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        result.utility_weights[i] =
            e.agents()[i].wealth / result.allocation.row(row).dot(full_powers.row(row));
    }
    result.iterations = iteration;
    result.residual = verify_equilibrium(e, result.prices, result.allocation, options.tol).residual();
    return result;
}

double uniqueness_probe(const Economy& e, int n_starts, double tol) {
    if (n_starts < 1) {
        throw Error(ErrorCode::ParamOutOfRange, "need at least one start");
    }
    std::vector<std::vector<double>> normalized;
    for (int k = 0; k < n_starts; ++k) {
        auto prices = solve_equilibrium(e, {tol, 1'000'000, k}).prices;
        const double total = std::accumulate(prices.begin(), prices.end(), 0.0);
        for (double& p : prices) p /= total;
        normalized.push_back(std::move(prices));
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < normalized.size(); ++a) {
        for (std::size_t b = a + 1; b < normalized.size(); ++b) {
            for (std::size_t t = 0; t < normalized[a].size(); ++t) {
                worst = std::max(worst, std::abs(normalized[a][t] - normalized[b][t]));
            }
        }
    }
    return worst;
}

}  // namespace impatience
