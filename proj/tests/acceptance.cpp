// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "impatience/aggregate.hpp"
#include "impatience/decompose.hpp"
#include "impatience/discount.hpp"
#include "impatience/market.hpp"
#include "impatience/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

using namespace impatience;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    fmt::print("criterion {:>2}: {}  {}\n", id, ok ? "PASS" : "FAIL", detail);
    if (!ok) ++failures;
}

// Split side minus lump side of the convexity axiom, evaluated from scratch.
double axiom_margin(const DiscountFactor& f, double k, double r, int t) {
    const double b = 1.0 + r;
    const auto u = static_cast<std::size_t>(t);
    const double split = 0.5 * k * std::pow(b, t - 1) * f[u - 1] + 0.5 * k * std::pow(b, t + 1) * f[u + 1];
    const double lump = k * std::pow(b, t) * f[u];
    return split - lump;
}

bool log_convex(std::span<const double> v, double rel_tol) {
    for (std::size_t t = 0; t + 2 < v.size(); ++t) {
        if (v[t + 1] * v[t + 1] > v[t] * v[t + 2] * (1.0 + rel_tol)) return false;
    }
    return true;
}

void criterion_1() {
    const auto start = Clock::now();
    InstanceGenerator gen(101);
    int di_cases = 0, di_fail = 0, witness_fail = 0;
    for (int i = 0; i < 500; ++i) {
        const auto f = gen.decreasing_impatience(32);
        for (double k : {0.5, 1.0, 10.0}) {
            for (int j = 1; j <= 20; ++j) {
                for (int t = 1; t < f.horizon(); ++t) {
                    ++di_cases;
                    if (!compound_interest_convexity_holds(f, k, 0.5 * j, t)) ++di_fail;
                }
            }
        }
    }
    for (int i = 0; i < 500; ++i) {
        const auto f = gen.non_decreasing_impatience(32);
        const auto w = find_convexity_violation(f);
        if (!w) {
            ++witness_fail;
            continue;
        }
        const double scale = std::pow(1.0 + w->rate, w->period) * f[static_cast<std::size_t>(w->period)];
        const bool violated = axiom_margin(f, 1.0, w->rate, w->period) < -1e-10 * scale &&
                              !compound_interest_convexity_holds(f, 1.0, w->rate, w->period);
        if (!violated) ++witness_fail;
    }
    const double elapsed = seconds_since(start);
    report(1, di_fail == 0 && witness_fail == 0 && elapsed <= 10.0,
           fmt::format("DI grid {} checks, {} failures; non-DI witnesses 500, {} failures; {:.2f}s (limit 10s)",
                       di_cases, di_fail, witness_fail, elapsed));
}

void criterion_2() {
    const auto start = Clock::now();
    InstanceGenerator gen(202);
    double worst = 0.0;
    int bad_components = 0;
    for (int i = 0; i < 500; ++i) {
        const auto f = gen.decreasing_impatience(32, 0.95);
        const auto d = decompose(f);
        const auto r = reconstruct(d, f.horizon());
        for (std::size_t t = 0; t < f.size(); ++t) worst = std::max(worst, std::abs(r[t] / f[t] - 1.0));
        const double gamma = f[f.size() - 1] / f[f.size() - 2];
        for (const auto& c : d.components) {
            const bool ok = c.beta > 0.0 && c.beta <= 1.0 && c.delta > 0.0 && c.delta < 1.0 &&
                            std::abs(c.delta - gamma) <= 1e-15 &&
                            is_decreasing_impatience(from_generalized_beta_delta(c.beta, c.delta, c.switch_period,
                                                                                 f.horizon()));
            if (!ok) ++bad_components;
        }
    }
    const double elapsed = seconds_since(start);
    report(2, worst <= 1e-9 && bad_components == 0 && elapsed <= 5.0,
           fmt::format("500 round trips, max relative error {:.3e} (limit 1e-9); {} bad components; {:.2f}s (limit 5s)",
                       worst, bad_components, elapsed));
}

void criterion_3() {
    InstanceGenerator gen(303);
    double worst = 0.0, most_negative = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto h = gen.concave_sequence(32);
        const auto b = min_basis_weights(h);
        for (std::size_t t = 0; t < h.size(); ++t) {
            double sum = 0.0;
            for (std::size_t s = 0; s < b.alpha.size(); ++s) sum += b.alpha[s] * static_cast<double>(std::min(s, t));
            worst = std::max(worst, std::abs(sum - h[t]));
        }
        for (double a : b.alpha) most_negative = std::min(most_negative, a);
    }
    report(3, worst <= 1e-12 && most_negative >= -1e-12,
           fmt::format("500 concave sequences, max abs error {:.3e} (limit 1e-12), min alpha {:.3e}", worst,
                       most_negative));
}

void criterion_4() {
    InstanceGenerator gen(404);
    int failed = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto f = gen.decreasing_impatience(32, 0.95);
        const auto [e, r] = synthesize_economy(f);
        if (!verify_equilibrium(e, r.prices, r.allocation, 1e-10).passed) ++failed;
        for (std::size_t t = 0; t < f.size(); ++t) {
            worst_ratio = std::max(worst_ratio, std::abs(r.prices[t] * f[0] / f[t] - 1.0));
        }
    }
    report(4, failed == 0 && worst_ratio <= 1e-15,
           fmt::format("200 synthesized economies, {} verification failures; max |p*f(0)/f - 1| = {:.3e}", failed,
                       worst_ratio));
}

struct SolvedSet {
    std::vector<Economy> economies;
    std::vector<EquilibriumResult> results;
    int errors = 0;
};

SolvedSet solve_random(std::uint64_t seed, int count) {
    InstanceGenerator gen(seed);
    SolvedSet set;
    for (int i = 0; i < count; ++i) {
        auto e = gen.economy(8, 24);
        try {
            set.results.push_back(solve_equilibrium(e, {1e-10, 1'000'000, 0}));
            set.economies.push_back(std::move(e));
        } catch (const std::exception&) {
            ++set.errors;
        }
    }
    return set;
}

void criterion_5_and_6() {
    const auto set = solve_random(505, 200);
    double worst_residual = 0.0, worst_envelope = 0.0, worst_walras = 0.0;
    int not_di = 0;
    for (std::size_t k = 0; k < set.economies.size(); ++k) {
        const auto& e = set.economies[k];
        const auto& r = set.results[k];
        worst_residual = std::max(worst_residual, verify_equilibrium(e, r.prices, r.allocation, 1e-8).residual());
        if (!is_decreasing_impatience(DiscountFactor(r.prices), 1e-8) || !log_convex(r.prices, 1e-8)) ++not_di;

        const double T = e.horizon();
        const double top = *std::max_element(r.prices.begin(), r.prices.end());
        for (std::size_t t = 0; t < r.prices.size(); ++t) {
            double envelope = 0.0;
            for (std::size_t i = 0; i < e.size(); ++i) {
                const double d = e.agents()[i].delta;
                const double measure = (1.0 - d) * std::pow(d, static_cast<double>(t)) / (1.0 - std::pow(d, T + 1.0));
                envelope = std::max(envelope, r.join_weights[i] * measure);
            }
            worst_envelope = std::max(worst_envelope, std::abs(envelope - r.prices[t]) / top);
        }
        const double spend = std::accumulate(r.prices.begin(), r.prices.end(), 0.0);
        worst_walras = std::max(worst_walras, std::abs(spend - e.total_wealth()));
    }
    const bool all_solved = set.errors == 0;
    report(5, all_solved && worst_residual <= 1e-8 && not_di == 0,
           fmt::format("200 random economies, {} solver errors, max residual {:.3e} (limit 1e-8), {} non-DI price paths",
                       set.errors, worst_residual, not_di));
    report(6, all_solved && worst_envelope <= 1e-8 && worst_walras <= 1e-8,
           fmt::format("join-weight envelope max error {:.3e} (limit 1e-8); Walras max error {:.3e}", worst_envelope,
                       worst_walras));
}

void criterion_7() {
    InstanceGenerator gen(707);
    double worst = 0.0;
    int errors = 0;
    for (int i = 0; i < 50; ++i) {
        const auto e = gen.economy(8, 24);
        try {
            worst = std::max(worst, uniqueness_probe(e, 5, 1e-10));
        } catch (const std::exception&) {
            ++errors;
        }
    }
    report(7, errors == 0 && worst <= 1e-6,
           fmt::format("50 economies x 5 starts, max pairwise price distance {:.3e} (limit 1e-6), {} errors", worst,
                       errors));
}

// Maximizes sum_i w_i log u_i over x_0(t) in [0, 1], x_1 = 1 - x_0, by coordinate ascent.
std::vector<double> nash_welfare_oracle(const std::vector<double>& delta, const std::vector<double>& wealth, int T) {
    const auto n = static_cast<std::size_t>(T) + 1;
    std::vector<double> x(n, 0.5);
    auto welfare = [&](const std::vector<double>& z) {
        double u0 = 0.0, u1 = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            u0 += z[t] * std::pow(delta[0], static_cast<double>(t));
            u1 += (1.0 - z[t]) * std::pow(delta[1], static_cast<double>(t));
        }
        return wealth[0] * std::log(u0) + wealth[1] * std::log(u1);
    };
    // coarse grid start, then golden-section refinement per coordinate
    for (std::size_t t = 0; t < n; ++t) {
        double best = -INFINITY, arg = 0.5;
        for (int g = 0; g <= 100; ++g) {
            x[t] = g / 100.0;
            if (const double v = welfare(x); v > best) best = v, arg = x[t];
        }
        x[t] = arg;
    }
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int sweep = 0; sweep < 2000; ++sweep) {
        double moved = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double lo = 0.0, hi = 1.0;
            auto at = [&](double v) {
                auto z = x;
                z[t] = v;
                return welfare(z);
            };
            while (hi - lo > 1e-12) {
                const double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
                if (at(a) < at(b)) lo = a; else hi = b;
            }
            const double v = 0.5 * (lo + hi);
            moved = std::max(moved, std::abs(v - x[t]));
            x[t] = v;
        }
        if (moved < 1e-10) break;
    }
    double u0 = 0.0, u1 = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        u0 += x[t] * std::pow(delta[0], static_cast<double>(t));
        u1 += (1.0 - x[t]) * std::pow(delta[1], static_cast<double>(t));
    }
    std::vector<double> p(n);
    for (std::size_t t = 0; t < n; ++t) {
        p[t] = std::max(wealth[0] * std::pow(delta[0], static_cast<double>(t)) / u0,
                        wealth[1] * std::pow(delta[1], static_cast<double>(t)) / u1);
    }
    return p;
}

void criterion_8() {
    const auto start = Clock::now();
    const Economy e({{0.5, 1.0}, {0.9, 1.0}}, 3);
    const auto solved = solve_equilibrium(e);
    const auto oracle = nash_welfare_oracle({0.5, 0.9}, {1.0, 1.0}, 3);
    double worst = 0.0;
    for (std::size_t t = 0; t < oracle.size(); ++t) {
        worst = std::max(worst, std::abs(solved.prices[t] / oracle[t] - 1.0));
    }
    const double elapsed = seconds_since(start);
    report(8, worst <= 1e-4 && elapsed <= 1.0,
           fmt::format("two-agent T=3 prices vs Nash-welfare oracle, max relative gap {:.3e} (limit 1e-4); {:.3f}s",
                       worst, elapsed));
}

NormalizedFactor exponential(double delta, int T) {
    std::vector<double> v;
    for (int t = 0; t <= T; ++t) v.push_back(std::pow(delta, t));
    return NormalizedFactor(std::move(v));
}

void criterion_9() {
    InstanceGenerator gen(909);
    int gm_failures = 0;
    for (int i = 0; i < 500; ++i) {
        const auto p = gen.profile(5, 16);
        if (!run_axiom_suite(make_geometric_mean(gen.weights(p.size())), p, 1e-10).all()) ++gm_failures;
    }

    const int T = 4;
    const Profile fast_slow({exponential(0.5, T), exponential(0.9, T)});
    const Profile far_apart({exponential(0.3, T), exponential(0.9, T)});
    const Profile mixed({exponential(0.5, T), normalize(from_generalized_beta_delta(0.6, 0.9, 1, T))});

    const auto constant = run_axiom_suite(make_constant_aggregator(0.95), fast_slow, 1e-10);
    const auto tail = run_axiom_suite(
        make_tail_dependent_aggregator(Weights({0.8, 0.2}), Weights({0.2, 0.8})), mixed, 1e-10);
    const auto arithmetic = run_axiom_suite(make_arithmetic_mean(), far_apart, 1e-10);

    const bool constant_ok = !constant.pareto && constant.iia && constant.time_consistency;
    const bool tail_ok = tail.pareto && !tail.iia && tail.time_consistency;
    const bool arithmetic_ok = arithmetic.pareto && arithmetic.iia && !arithmetic.time_consistency;
    auto verdicts = [](const AxiomReport& r) {
        return fmt::format("P={} I={} T={}", r.pareto ? 1 : 0, r.iia ? 1 : 0, r.time_consistency ? 1 : 0);
    };
    report(9, gm_failures == 0 && constant_ok && tail_ok && arithmetic_ok,
           fmt::format("geometric mean 500 profiles, {} failures; constant [{}], tail-dependent [{}], arithmetic [{}]",
                       gm_failures, verdicts(constant), verdicts(tail), verdicts(arithmetic)));
}

void criterion_10() {
    const std::vector<WeightedExponential> pairs{{1.0, 0.3}, {0.65, 0.6}, {0.3, 0.8}};
    const int T = 20;
    const auto p = envelope_prices(pairs, T);
    const auto leaders = envelope_leaders(pairs, T);

    bool decreasing = p[0] == 1.0;
    for (std::size_t t = 1; t < p.size(); ++t) decreasing = decreasing && p[t] <= p[t - 1];

    std::vector<int> direct(p.size());
    for (int t = 0; t <= T; ++t) {
        const double a = std::pow(0.3, t), b = 0.65 * std::pow(0.6, t), c = 0.3 * std::pow(0.8, t);
        direct[static_cast<std::size_t>(t)] = (a >= b && a >= c) ? 0 : (b >= c ? 1 : 2);
    }
    const bool order = direct == leaders && std::is_sorted(direct.begin(), direct.end()) && direct.front() == 0 &&
                       direct.back() == 2 && std::find(direct.begin(), direct.end(), 1) != direct.end();
    const auto first = [&](int agent) {
        return static_cast<int>(std::find(direct.begin(), direct.end(), agent) - direct.begin());
    };
    report(10, decreasing && log_convex(p, 1e-10) && order,
           fmt::format("p(0)={}, decreasing={}, log-convex={}, leaders 0.3-agent from t=0, 0.6-agent from t={}, "
                       "0.8-agent from t={}",
                       p[0], decreasing, log_convex(p, 1e-10), first(1), first(2)));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5_and_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    fmt::print("{} of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
