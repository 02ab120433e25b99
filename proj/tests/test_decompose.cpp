#include "impatience/decompose.hpp"
#include "impatience/discount.hpp"
#include "impatience/error.hpp"
#include "impatience/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace impatience;

namespace {

double product_of_components(const Decomposition& d, int t) {
    double v = d.scale;
    for (const auto& c : d.components) {
        const double component = std::pow(c.beta, std::min(c.switch_period, t)) * std::pow(c.delta, t);
        v *= std::pow(component, c.eta);
    }
    return v;
}

double max_relative_error(const DiscountFactor& a, const DiscountFactor& b) {
    double err = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) err = std::max(err, std::abs(a[t] / b[t] - 1.0));
    return err;
}

}  // namespace

TEST_CASE("tail ratio") {
    CHECK(tail_ratio(DiscountFactor({1.0, 0.5, 0.25, 0.125})) == doctest::Approx(0.5));
    CHECK(tail_ratio(from_generalized_beta_delta(0.6, 0.9, 1, 3)) == doctest::Approx(0.9));
    CHECK(tail_ratio(DiscountFactor({1.0, 0.5, 0.26, 0.14})) == doctest::Approx(0.14 / 0.26));
    CHECK_THROWS_AS(tail_ratio(DiscountFactor({1.0, 0.9, 0.729, 0.59049})), Error);
}

TEST_CASE("min-basis weights") {
    const std::vector<double> zero{0.0, 0.0, 0.0, 0.0};
    const auto b0 = min_basis_weights(zero);
    REQUIRE(b0.alpha.size() == 3);
    CHECK(b0.alpha[1] == 0.0);
    CHECK(b0.alpha[2] == 0.0);

    const std::vector<double> h1{0.0, 1.0, 1.5, 1.5};
    const auto b1 = min_basis_weights(h1);
    CHECK(b1.alpha[0] == 0.0);
    CHECK(b1.alpha[1] == doctest::Approx(0.5));
    CHECK(b1.alpha[2] == doctest::Approx(0.5));
    for (int t = 0; t <= 3; ++t) CHECK(b1.evaluate(t) == doctest::Approx(h1[static_cast<std::size_t>(t)]));

    const std::vector<double> h2{0.0, 1.0, 2.0, 2.0};
    const auto b2 = min_basis_weights(h2);
    CHECK(b2.alpha[1] == doctest::Approx(0.0));
    CHECK(b2.alpha[2] == doctest::Approx(1.0));
    for (int t = 0; t <= 3; ++t) CHECK(b2.evaluate(t) == doctest::Approx(h2[static_cast<std::size_t>(t)]));

    const std::vector<double> convex{0.0, 1.0, 3.0, 3.0};
    CHECK_THROWS_AS(min_basis_weights(convex), Error);
    const std::vector<double> unflat{0.0, 1.0, 1.5, 1.8};
    CHECK_THROWS_AS(min_basis_weights(unflat), Error);
}

TEST_CASE("min-basis increments telescope") {
    InstanceGenerator gen(41);
    for (int i = 0; i < 200; ++i) {
        const auto h = gen.concave_sequence(24);
        const auto b = min_basis_weights(h);
        const auto T = h.size() - 1;
        for (std::size_t t = 0; t + 1 <= T; ++t) {
            double tail = 0.0;
            for (std::size_t s = t + 1; s < b.alpha.size(); ++s) tail += b.alpha[s];
            CHECK(h[t + 1] - h[t] == doctest::Approx(tail).epsilon(1e-9).scale(1.0));
        }
        for (double a : b.alpha) CHECK(a >= -1e-12);
    }
}

TEST_CASE("decompose stationary factor") {
    const auto d = decompose(DiscountFactor({1.0, 0.5, 0.25, 0.125, 0.0625}));
    REQUIRE(d.components.size() == 1);
    CHECK(d.components[0].beta == 1.0);
    CHECK(d.components[0].delta == doctest::Approx(0.5));
    CHECK(d.components[0].eta == 1.0);
    CHECK(d.scale == 1.0);
    const auto r = reconstruct(d, 4);
    const std::vector<double> expected{1.0, 0.5, 0.25, 0.125, 0.0625};
    for (std::size_t t = 0; t < expected.size(); ++t) CHECK(r[t] == expected[t]);
}

TEST_CASE("decompose quasi-hyperbolic factor") {
    const auto f = from_generalized_beta_delta(0.6, 0.9, 1, 4);
    const auto d = decompose(f);
    const double alpha1 = std::log(5.0 / 3.0);
    REQUIRE(d.components.size() == 2);
    CHECK(d.basis.alpha[1] == doctest::Approx(alpha1).epsilon(1e-12));
    CHECK(d.components[0].beta == doctest::Approx(std::exp(-2.0 * alpha1)).epsilon(1e-12));
    CHECK(d.components[0].delta == doctest::Approx(0.9));
    CHECK(d.components[0].switch_period == 1);
    CHECK(d.components[0].eta == 0.5);
    CHECK(d.components[1].beta == 1.0);
    CHECK(d.components[1].delta == doctest::Approx(0.9));
    CHECK(d.components[1].eta == 0.5);
    for (int t = 0; t <= 4; ++t) CHECK(product_of_components(d, t) == doctest::Approx(f[static_cast<std::size_t>(t)]));
    CHECK(max_relative_error(reconstruct(d, 4), f) <= 1e-12);
}

TEST_CASE("decompose generic factor") {
    const DiscountFactor f({1.0, 0.5, 0.26, 0.14, 0.0754});
    const auto d = decompose(f);
    CHECK(d.gamma == doctest::Approx(0.0754 / 0.14));
    double err = 0.0;
    for (int t = 0; t <= 4; ++t) err = std::max(err, std::abs(product_of_components(d, t) / f[static_cast<std::size_t>(t)] - 1.0));
    CHECK(err <= 1e-9);
    double eta_sum = 0.0;
    for (const auto& c : d.components) eta_sum += c.eta;
    CHECK(eta_sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("decompose intermediates") {
    InstanceGenerator gen(43);
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.decreasing_impatience(24);
        const auto d = decompose(f);
        const auto T = static_cast<std::size_t>(f.horizon());
        CHECK(d.gamma == doctest::Approx(f[T] / f[T - 1]));
        CHECK(d.h[0] == 0.0);
        CHECK(d.h[T] == d.h[T - 1]);
        for (std::size_t t = 0; t + 1 <= T; ++t) {
            CHECK(d.h[t + 1] >= d.h[t] - 1e-12);
            CHECK(d.g[t + 1] <= d.g[t] * (1.0 + 1e-12));
        }
        for (const auto& c : d.components) {
            CHECK(c.beta > 0.0);
            CHECK(c.beta <= 1.0);
            CHECK(c.delta == d.gamma);
            CHECK(c.delta < 1.0);
            CHECK(is_decreasing_impatience(from_generalized_beta_delta(c.beta, c.delta, c.switch_period, f.horizon())));
        }
        CHECK(max_relative_error(reconstruct(d, f.horizon()), f) <= 1e-9);
    }
}

TEST_CASE("decompose rejects") {
    CHECK_THROWS_AS(decompose(DiscountFactor({1.0, 0.9, 0.729, 0.59049})), Error);
    CHECK_THROWS_AS(decompose(DiscountFactor({1.0, 0.9999999, 0.9999998})), Error);
}

TEST_CASE("single component reconstruction") {
    Decomposition d;
    d.horizon = 5;
    d.gamma = 0.9;
    d.components = {{0.8, 0.9, 2, 1.0}};
    const auto r = reconstruct(d, 5);
    const auto direct = from_generalized_beta_delta(0.8, 0.9, 2, 5);
    for (std::size_t t = 0; t < r.size(); ++t) CHECK(r[t] == doctest::Approx(direct[t]).epsilon(1e-15));
}
