#include "impatience/selftest.hpp"

#include "impatience/aggregate.hpp"
#include "impatience/decompose.hpp"
#include "impatience/discount.hpp"
#include "impatience/error.hpp"
#include "impatience/market.hpp"
#include "impatience/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

namespace impatience {

namespace {

struct CaseOutcome {
    bool ok = true;
    double residual = 0.0;
};

// Evaluates cases[0..count) on `jobs` threads; results are reduced in index order.
SuiteResult run_cases(const std::string& name, int count, int jobs, const std::function<CaseOutcome(int)>& body) {
    std::vector<CaseOutcome> outcomes(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int k = next++; k < count; k = next++) {
            try {
                outcomes[static_cast<std::size_t>(k)] = body(k);
            } catch (const Error&) {
                outcomes[static_cast<std::size_t>(k)] = {false, INFINITY};
            }
        }
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::max(jobs, 1); ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SuiteResult result{name, count, 0, 0.0};
    for (const auto& o : outcomes) {
        if (!o.ok) ++result.failures;
        result.max_residual = std::max(result.max_residual, o.residual);
    }
    return result;
}

int scaled(int base, double factor) { return std::max(1, static_cast<int>(std::lround(base * factor))); }

std::uint64_t suite_seed(std::uint64_t seed, std::uint64_t salt) { return seed * 0x9E3779B97F4A7C15ULL + salt; }

template <typename T, typename Make>
std::vector<T> draw(int count, std::uint64_t seed, Make make) {
    InstanceGenerator gen(seed);
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out.push_back(make(gen));
    return out;
}

double max_relative_error(const DiscountFactor& a, const DiscountFactor& b) {
    double worst = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) worst = std::max(worst, std::abs(a[t] / b[t] - 1.0));
    return worst;
}

bool axiom_grid_holds(const DiscountFactor& f) {
    for (double k : {0.5, 1.0, 10.0}) {
        for (int j = 1; j <= 20; ++j) {
            const double r = 0.5 * j;  // grid over (0, 10]
            for (int t = 1; t < f.horizon(); ++t) {
                if (!compound_interest_convexity_holds(f, k, r, t)) return false;
            }
        }
    }
    return true;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
    const double sf = options.size_factor;
    const int jobs = options.jobs;
    std::vector<SuiteResult> results;

    {
        auto factors = draw<DiscountFactor>(scaled(500, sf), suite_seed(options.seed, 1),
                                            [](InstanceGenerator& g) { return g.decreasing_impatience(); });
        if (options.inject_non_di) {
            std::vector<double> v;
            for (int t = 0; t <= 3; ++t) v.push_back(std::pow(0.9, t * t));
            factors.emplace_back(v);
        }
        results.push_back(run_cases("convexity/decreasing-impatience-passes-axiom", static_cast<int>(factors.size()), jobs,
                                    [&](int k) {
                                        const auto& f = factors[static_cast<std::size_t>(k)];
                                        return CaseOutcome{axiom_grid_holds(f) && !find_convexity_violation(f), 0.0};
                                    }));
        const auto bad = draw<DiscountFactor>(scaled(500, sf), suite_seed(options.seed, 2),
                                              [](InstanceGenerator& g) { return g.non_decreasing_impatience(); });
        results.push_back(run_cases("convexity/violation-witness", static_cast<int>(bad.size()), jobs, [&](int k) {
            const auto& f = bad[static_cast<std::size_t>(k)];
            const auto w = find_convexity_violation(f);
            const bool ok = w && w->certifies_violation() &&
                            !compound_interest_convexity_holds(f, 1.0, w->rate, w->period);
            return CaseOutcome{ok, 0.0};
        }));
    }

    {
        const auto factors = draw<DiscountFactor>(scaled(500, sf), suite_seed(options.seed, 3),
                                                  [](InstanceGenerator& g) { return g.decreasing_impatience(32, 0.95); });
        results.push_back(run_cases("decompose/round-trip", static_cast<int>(factors.size()), jobs, [&](int k) {
            const auto& f = factors[static_cast<std::size_t>(k)];
            const auto d = decompose(f);
            const double err = max_relative_error(reconstruct(d, f.horizon()), f);
            bool ok = err <= 1e-9;
            for (const auto& c : d.components) {
                ok = ok && c.beta > 0.0 && c.beta <= 1.0 && c.delta == d.gamma && c.delta < 1.0 &&
                     is_decreasing_impatience(from_generalized_beta_delta(c.beta, c.delta, std::min(c.switch_period, f.horizon()), f.horizon()));
            }
            return CaseOutcome{ok, err};
        }));
    }

    {
        const auto hs = draw<std::vector<double>>(scaled(500, sf), suite_seed(options.seed, 4),
                                                  [](InstanceGenerator& g) { return g.concave_sequence(); });
        results.push_back(run_cases("decompose/min-basis", static_cast<int>(hs.size()), jobs, [&](int k) {
            const auto& h = hs[static_cast<std::size_t>(k)];
            const auto basis = min_basis_weights(h);
            double err = 0.0;
            for (std::size_t t = 0; t < h.size(); ++t) {
                err = std::max(err, std::abs(basis.evaluate(static_cast<int>(t)) - h[t]));
            }
            const bool nonneg = std::all_of(basis.alpha.begin(), basis.alpha.end(), [](double a) { return a >= -1e-12; });
            return CaseOutcome{err <= 1e-12 && nonneg, err};
        }));
    }

    {
        const auto factors = draw<DiscountFactor>(scaled(200, sf), suite_seed(options.seed, 5),
                                                  [](InstanceGenerator& g) { return g.decreasing_impatience(32, 0.95); });
        results.push_back(run_cases("market/synthesize", static_cast<int>(factors.size()), jobs, [&](int k) {
            const auto& f = factors[static_cast<std::size_t>(k)];
            const auto [economy, eq] = synthesize_economy(f);
            const auto report = verify_equilibrium(economy, eq.prices, eq.allocation, 1e-10);
            bool proportional = true;
            for (std::size_t t = 0; t < f.size(); ++t) proportional = proportional && eq.prices[t] == f[t] / f[0];
            return CaseOutcome{report.passed && proportional, report.residual()};
        }));
    }

    {
        const auto economies = draw<Economy>(scaled(200, sf), suite_seed(options.seed, 6),
                                             [](InstanceGenerator& g) { return g.economy(8, 24); });
        results.push_back(run_cases("market/solve-converse-envelope-walras", static_cast<int>(economies.size()), jobs,
                                    [&](int k) {
                                        const auto& e = economies[static_cast<std::size_t>(k)];
                                        const auto eq = solve_equilibrium(e, {1e-10, 1'000'000, 0});
                                        const double envelope = envelope_residual(eq.prices, e, eq.join_weights);
                                        const double spend = std::accumulate(eq.prices.begin(), eq.prices.end(), 0.0);
                                        const double walras = std::abs(spend - e.total_wealth());
                                        const bool di = is_decreasing_impatience(DiscountFactor(eq.prices), 1e-8);
                                        const double residual = std::max({eq.residual, envelope, walras});
                                        return CaseOutcome{di && eq.residual <= 1e-8 && envelope <= 1e-8 && walras <= 1e-8,
                                                           residual};
                                    }));
    }

    {
        const auto economies = draw<Economy>(scaled(50, sf), suite_seed(options.seed, 7),
                                             [](InstanceGenerator& g) { return g.economy(8, 24); });
        results.push_back(run_cases("market/uniqueness", static_cast<int>(economies.size()), jobs, [&](int k) {
            const double d = uniqueness_probe(economies[static_cast<std::size_t>(k)], 5, 1e-10);
            return CaseOutcome{d <= 1e-6, d};
        }));
    }

    {
        struct Case {
            Profile profile;
            Weights weights;
        };
        const auto cases = draw<Case>(scaled(500, sf), suite_seed(options.seed, 8), [](InstanceGenerator& g) {
            auto p = g.profile(5, 16);
            auto w = g.weights(p.size());
            return Case{std::move(p), std::move(w)};
        });
        results.push_back(run_cases("aggregate/geometric-mean-axioms", static_cast<int>(cases.size()), jobs, [&](int k) {
            const auto& c = cases[static_cast<std::size_t>(k)];
            return CaseOutcome{run_axiom_suite(make_geometric_mean(c.weights), c.profile, 1e-10).all(), 0.0};
        }));
    }

    {
        std::vector<WeightedExponential> pairs{{1.0, 0.3}, {0.65, 0.6}, {0.3, 0.8}};
        results.push_back(run_cases("market/three-agent-envelope", 1, 1, [&](int) {
            const auto p = envelope_prices(pairs, 10);
            const auto leaders = envelope_leaders(pairs, 10);
            const bool ordered = std::is_sorted(leaders.begin(), leaders.end()) && leaders.front() == 0 &&
                                 leaders.back() == 2;
            return CaseOutcome{p[0] == 1.0 && ordered && is_decreasing_impatience(DiscountFactor(p)), 0.0};
        }));
    }
    return results;
}

}  // namespace impatience
