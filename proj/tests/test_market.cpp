#include "impatience/discount.hpp"
#include "impatience/error.hpp"
#include "impatience/market.hpp"
#include "impatience/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace impatience;

namespace {

bool has_violation(const VerificationReport& r, Violation::Kind kind, int period) {
    for (const auto& v : r.violations) {
        if (v.kind == kind && v.period == period) return true;
    }
    return false;
}

std::vector<double> normalized(std::vector<double> p) {
    const double p0 = p.front();
    for (double& v : p) v /= p0;
    return p;
}

}  // namespace

TEST_CASE("envelope prices") {
    const std::vector<WeightedExponential> pairs{{1.0, 0.3}, {0.65, 0.6}, {0.3, 0.8}};
    const auto p = envelope_prices(pairs, 6);
    const auto leaders = envelope_leaders(pairs, 6);
    CHECK(p[0] == 1.0);
    for (int t = 0; t <= 6; ++t) {
        const double direct = std::max({std::pow(0.3, t), 0.65 * std::pow(0.6, t), 0.3 * std::pow(0.8, t)});
        CHECK(p[static_cast<std::size_t>(t)] == doctest::Approx(direct).epsilon(1e-15));
    }
    int first_third = -1;
    for (int t = 0; t <= 6 && first_third < 0; ++t) {
        if (leaders[static_cast<std::size_t>(t)] == 2) first_third = t;
    }
    CHECK(first_third == 3);
    CHECK(p[3] == doctest::Approx(0.1536));

    const std::vector<WeightedExponential> single{{2.0, 0.5}};
    const auto q = envelope_prices(single, 3);
    CHECK(q == std::vector<double>{2.0, 1.0, 0.5, 0.25});

    const std::vector<WeightedExponential> zero{{0.0, 0.5}};
    CHECK_THROWS_AS(envelope_prices(zero, 3), Error);
}

TEST_CASE("envelope of weighted exponentials is log-convex") {
    InstanceGenerator gen(61);
    for (int i = 0; i < 200; ++i) {
        std::vector<WeightedExponential> pairs(static_cast<std::size_t>(gen.integer(1, 6)));
        for (auto& p : pairs) p = {gen.uniform(0.01, 3.0), gen.uniform(0.05, 0.95)};
        CHECK(is_decreasing_impatience(DiscountFactor(envelope_prices(pairs, gen.integer(2, 24)))));
    }
}

TEST_CASE("supporting lines") {
    const auto exp5 = DiscountFactor({1.0, 0.5, 0.25, 0.125});
    for (const auto& line : supporting_lines(exp5)) CHECK(line.slope == doctest::Approx(-std::log(0.5)));

    const auto qh = from_generalized_beta_delta(0.6, 0.9, 1, 4);
    const auto lines = supporting_lines(qh);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0].slope == doctest::Approx(-std::log(0.54)));
    CHECK(lines[1].slope == doctest::Approx(-std::log(0.54)));
    CHECK(lines[2].slope == doctest::Approx(-std::log(0.9)));
    for (const auto& line : lines) {
        for (int t = 0; t <= 4; ++t) {
            CHECK(line.intercept - t * line.slope <= std::log(qh[static_cast<std::size_t>(t)]) + 1e-12);
        }
    }
    CHECK_THROWS_AS(supporting_lines(DiscountFactor({1.0, 0.9, 0.729, 0.59049})), Error);
    CHECK_THROWS_AS(supporting_lines(DiscountFactor({1.0, 0.5, 0.5})), Error);
}

TEST_CASE("synthesize economy") {
    const auto [e1, r1] = synthesize_economy(DiscountFactor({1.0, 0.5, 0.25, 0.125}));
    REQUIRE(e1.size() == 4);
    const std::vector<double> wealth1{1.0, 0.5, 0.25, 0.125};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(e1.agents()[i].delta == doctest::Approx(0.5));
        CHECK(e1.agents()[i].wealth == doctest::Approx(wealth1[i]));
    }
    CHECK(verify_equilibrium(e1, r1.prices, r1.allocation, 1e-10).passed);

    const auto [e2, r2] = synthesize_economy(from_generalized_beta_delta(0.6, 0.9, 1, 3));
    const std::vector<double> delta2{0.54, 0.54, 0.9, 0.9}, wealth2{1.0, 0.54, 0.486, 0.4374};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(e2.agents()[i].delta == doctest::Approx(delta2[i]).epsilon(1e-12));
        CHECK(e2.agents()[i].wealth == doctest::Approx(wealth2[i]).epsilon(1e-12));
    }
    CHECK(verify_equilibrium(e2, r2.prices, r2.allocation, 1e-10).passed);
    CHECK(envelope_residual(r2.prices, e2, r2.join_weights) <= 1e-12);

    const auto [e3, r3] = synthesize_economy(DiscountFactor({1.0, 0.5, 0.26, 0.14}));
    const auto report = verify_equilibrium(e3, r3.prices, r3.allocation, 1e-10);
    CHECK(report.passed);
    CHECK(report.max_budget_error <= 1e-10);
}

TEST_CASE("verification") {
    const Economy single({{0.5, 1.0}}, 3);
    std::vector<double> p;
    for (int t = 0; t <= 3; ++t) p.push_back((1.0 - 0.5) * std::pow(0.5, t) / (1.0 - std::pow(0.5, 4)));
    const Allocation ones = Allocation::Ones(1, 4);
    CHECK(verify_equilibrium(single, p, ones, 1e-10).passed);

    const auto [e, r] = synthesize_economy(DiscountFactor({1.0, 0.5, 0.25, 0.125}));
    auto bumped = r.prices;
    bumped[2] *= 1.01;
    const auto report = verify_equilibrium(e, bumped, r.allocation, 1e-10);
    CHECK_FALSE(report.passed);
    CHECK(has_violation(report, Violation::Kind::Optimality, 2));

    CHECK_THROWS_AS(verify_equilibrium(single, std::vector<double>{1.0, 0.5}, ones, 1e-10), Error);

    Allocation over = ones;
    over(0, 1) = 1.5;
    CHECK(has_violation(verify_equilibrium(single, p, over, 1e-10), Violation::Kind::Feasibility, 1));
}

TEST_CASE("solve single agent") {
    const Economy e({{0.5, 1.0}}, 2);
    const auto r = solve_equilibrium(e);
    CHECK(r.prices[0] == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(r.prices[1] == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
    CHECK(r.prices[2] == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    for (int t = 0; t <= 2; ++t) CHECK(r.allocation(0, t) == doctest::Approx(1.0));
    const auto alpha = join_decomposition(r.prices, e, r.allocation);
    CHECK(alpha[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(uniqueness_probe(e, 5, 1e-10) == 0.0);
}

TEST_CASE("solve two agents") {
    const Economy e({{0.5, 1.0}, {0.9, 1.0}}, 3);
    const auto r = solve_equilibrium(e);
    CHECK(verify_equilibrium(e, r.prices, r.allocation, 1e-10).passed);
    CHECK(std::accumulate(r.prices.begin(), r.prices.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(envelope_residual(r.prices, e, r.join_weights) <= 1e-10);
    for (std::size_t i = 0; i < 2; ++i) {
        for (int t = 0; t <= 3; ++t) {
            CHECK(r.prices[static_cast<std::size_t>(t)] >=
                  r.utility_weights[i] * std::pow(e.agents()[i].delta, t) * (1.0 - 1e-10));
        }
    }
    CHECK(uniqueness_probe(e, 5, 1e-10) <= 1e-6);
}

TEST_CASE("solve reproduces a chosen envelope") {
    const std::vector<WeightedExponential> pairs{{1.0, 0.3}, {0.65, 0.6}, {0.3, 0.8}};
    const int T = 8;
    const auto p = envelope_prices(pairs, T);
    const auto leaders = envelope_leaders(pairs, T);
    std::vector<ExponentialAgent> agents;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double w = 0.0;
        for (int t = 0; t <= T; ++t) {
            if (leaders[static_cast<std::size_t>(t)] == static_cast<int>(i)) w += p[static_cast<std::size_t>(t)];
        }
        agents.push_back({pairs[i].delta, w});
    }
    const Economy e(agents, T);
    const auto r = solve_equilibrium(e);
    CHECK(verify_equilibrium(e, r.prices, r.allocation, 1e-10).passed);
    for (std::size_t t = 0; t < p.size(); ++t) CHECK(r.prices[t] == doctest::Approx(p[t]).epsilon(1e-9));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(r.utility_weights[i] == doctest::Approx(pairs[i].alpha).epsilon(1e-9));
    }
}

TEST_CASE("solver on random economies") {
    InstanceGenerator gen(67);
    for (int k = 0; k < 40; ++k) {
        const auto e = gen.economy();
        const auto r = solve_equilibrium(e);
        const auto report = verify_equilibrium(e, r.prices, r.allocation, 1e-8);
        CHECK(report.passed);
        CHECK(is_decreasing_impatience(DiscountFactor(r.prices), 1e-8));
        CHECK(envelope_residual(r.prices, e, r.join_weights) <= 1e-8);
        const double total = std::accumulate(r.prices.begin(), r.prices.end(), 0.0);
        CHECK(total == doctest::Approx(e.total_wealth()).epsilon(1e-8));
        const auto again = solve_equilibrium(e);
        CHECK(again.prices == r.prices);
    }
}

TEST_CASE("merged agents") {
    const Economy split({{0.7, 0.4}, {0.7, 0.6}, {0.3, 1.0}}, 5);
    const Economy merged({{0.7, 1.0}, {0.3, 1.0}}, 5);
    const auto a = solve_equilibrium(split);
    const auto b = solve_equilibrium(merged);
    CHECK(verify_equilibrium(split, a.prices, a.allocation, 1e-10).passed);
    const auto pa = normalized(a.prices), pb = normalized(b.prices);
    for (std::size_t t = 0; t < pa.size(); ++t) CHECK(pa[t] == doctest::Approx(pb[t]).epsilon(1e-10));
}

TEST_CASE("economy validation") {
    CHECK_THROWS_AS(Economy({{1.0, 1.0}}, 3), Error);
    CHECK_THROWS_AS(Economy({{0.5, 0.0}}, 3), Error);
    CHECK_THROWS_AS(Economy({}, 3), Error);
    CHECK(exponential_measure(0.5, 0, 2) == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("uniqueness on a larger economy") {
    InstanceGenerator gen(71);
    std::vector<ExponentialAgent> agents;
    for (int i = 0; i < 10; ++i) agents.push_back({gen.uniform(0.05, 0.95), gen.uniform(0.1, 2.0)});
    CHECK(uniqueness_probe(Economy(agents, 16), 3, 1e-10) <= 1e-6);
}
