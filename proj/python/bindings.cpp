#include "impatience/aggregate.hpp"
#include "impatience/decompose.hpp"
#include "impatience/discount.hpp"
#include "impatience/error.hpp"
#include "impatience/market.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace impatience;

namespace {

using Values = std::vector<double>;

Profile to_profile(const std::vector<Values>& members) {
    std::vector<NormalizedFactor> out;
    for (const auto& m : members) out.push_back(normalize(DiscountFactor(m)));
    return Profile(std::move(out));
}

Economy to_economy(const std::vector<std::pair<double, double>>& agents, int horizon) {
    std::vector<ExponentialAgent> out;
    for (const auto& [delta, wealth] : agents) out.push_back({delta, wealth});
    return Economy(std::move(out), horizon);
}

py::dict decomposition_dict(const Decomposition& d) {
    py::list components;
    for (const auto& c : d.components) {
        components.append(py::dict(py::arg("beta") = c.beta, py::arg("delta") = c.delta,
                                   py::arg("switch") = c.switch_period, py::arg("eta") = c.eta));
    }
    return py::dict(py::arg("horizon") = d.horizon, py::arg("scale") = d.scale, py::arg("gamma") = d.gamma,
                    py::arg("components") = components, py::arg("h") = d.h, py::arg("g") = d.g,
                    py::arg("alpha") = d.basis.alpha);
}

Decomposition decomposition_from(const py::dict& doc) {
    Decomposition d;
    d.horizon = doc["horizon"].cast<int>();
    d.scale = doc["scale"].cast<double>();
    d.gamma = doc["gamma"].cast<double>();
    for (const auto& item : doc["components"]) {
        const auto c = item.cast<py::dict>();
        d.components.push_back({c["beta"].cast<double>(), c["delta"].cast<double>(), c["switch"].cast<int>(),
                                c["eta"].cast<double>()});
    }
    return d;
}

py::dict equilibrium_dict(const EquilibriumResult& r) {
    return py::dict(py::arg("prices") = r.prices, py::arg("allocation") = r.allocation,
                    py::arg("join_weights") = r.join_weights, py::arg("utility_weights") = r.utility_weights,
                    py::arg("supports") = r.supports, py::arg("iterations") = r.iterations,
                    py::arg("residual") = r.residual);
}

py::dict report_dict(const VerificationReport& r) {
    py::list violations;
    for (const auto& v : r.violations) {
        violations.append(py::dict(py::arg("kind") = to_string(v.kind), py::arg("agent") = v.agent,
                                   py::arg("period") = v.period, py::arg("amount") = v.amount));
    }
    return py::dict(py::arg("passed") = r.passed, py::arg("max_budget_error") = r.max_budget_error,
                    py::arg("max_optimality_gap") = r.max_optimality_gap,
                    py::arg("max_supply_error") = r.max_supply_error, py::arg("violations") = violations);
}

Aggregator aggregator_named(const std::string& name, const Values& eta, std::size_t m) {
    if (name == "geometric") return make_geometric_mean(eta.empty() ? Weights::uniform(m) : Weights(eta));
    if (name == "arithmetic") return make_arithmetic_mean();
    if (name == "constant") return make_constant_aggregator(0.95);
    if (name == "tail") {
        Values a(m, 0.2 / static_cast<double>(m - 1)), b(m, 0.8 / static_cast<double>(m - 1));
        a[0] = 0.8;
        b[0] = 0.2;
        return make_tail_dependent_aggregator(Weights(a), Weights(b));
    }
    throw py::value_error("unknown aggregator '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_impatience, m) {
    m.doc() = "Decreasing impatience: detection, decomposition, aggregation and parimutuel markets";

    py::register_exception<Error>(m, "ImpatienceError", PyExc_ValueError);

    // discount factors
    m.def("from_generalized_beta_delta",
          [](double beta, double delta, int switch_period, int horizon) {
              return from_generalized_beta_delta(beta, delta, switch_period, horizon).vector();
          },
          py::arg("beta"), py::arg("delta"), py::arg("switch_period"), py::arg("horizon"));
    m.def("impatience_ratios", [](const Values& f) { return impatience_ratios(DiscountFactor(f)); });
    m.def("is_decreasing_impatience",
          [](const Values& f, double rel_tol) { return is_decreasing_impatience(DiscountFactor(f), rel_tol); },
          py::arg("f"), py::arg("rel_tol") = kDefaultRelTol);
    m.def("is_increasing_impatience",
          [](const Values& f, double rel_tol) { return is_increasing_impatience(DiscountFactor(f), rel_tol); },
          py::arg("f"), py::arg("rel_tol") = kDefaultRelTol);
    m.def("is_stationary", [](const Values& f, double rel_tol) { return is_stationary(DiscountFactor(f), rel_tol); },
          py::arg("f"), py::arg("rel_tol") = kDefaultRelTol);
    m.def("compound_interest_convexity_holds",
          [](const Values& f, double k, double r, int t) {
              return compound_interest_convexity_holds(DiscountFactor(f), k, r, t);
          },
          py::arg("f"), py::arg("k"), py::arg("r"), py::arg("t"));
    m.def("find_convexity_violation", [](const Values& f) -> py::object {
        const auto w = find_convexity_violation(DiscountFactor(f));
        if (!w) return py::none();
        return py::dict(py::arg("period") = w->period, py::arg("rate") = w->rate, py::arg("lhs") = w->lhs,
                        py::arg("rhs") = w->rhs);
    });

    // decomposition
    m.def("min_basis_weights", [](const Values& h) { return min_basis_weights(h).alpha; });
    m.def("decompose", [](const Values& f) { return decomposition_dict(decompose(DiscountFactor(f))); });
    m.def("reconstruct",
          [](const py::dict& d, int horizon) { return reconstruct(decomposition_from(d), horizon).vector(); },
          py::arg("decomposition"), py::arg("horizon"));

    // aggregation
    m.def("geometric_mean",
          [](const std::vector<Values>& members, const Values& eta) {
              const auto p = to_profile(members);
              return geometric_mean(p, eta.empty() ? Weights::uniform(p.size()) : Weights(eta)).vector();
          },
          py::arg("members"), py::arg("eta") = Values{});
    m.def("axiom_report",
          [](const std::vector<Values>& members, const std::string& aggregator, const Values& eta, double rel_tol) {
              const auto p = to_profile(members);
              const auto r = run_axiom_suite(aggregator_named(aggregator, eta, p.size()), p, rel_tol);
              return py::dict(py::arg("pareto") = r.pareto, py::arg("iia") = r.iia,
                              py::arg("time_consistency") = r.time_consistency);
          },
          py::arg("members"), py::arg("aggregator") = "geometric", py::arg("eta") = Values{},
          py::arg("rel_tol") = 1e-10);

    // markets
    m.def("envelope_prices",
          [](const std::vector<std::pair<double, double>>& pairs, int horizon) {
              std::vector<WeightedExponential> w;
              for (const auto& [alpha, delta] : pairs) w.push_back({alpha, delta});
              return envelope_prices(w, horizon);
          },
          py::arg("pairs"), py::arg("horizon"));
    m.def("synthesize_economy", [](const Values& f) {
        auto [economy, result] = synthesize_economy(DiscountFactor(f));
        std::vector<std::pair<double, double>> agents;
        for (const auto& a : economy.agents()) agents.emplace_back(a.delta, a.wealth);
        auto out = equilibrium_dict(result);
        out["agents"] = agents;
        return out;
    });
    m.def("solve_equilibrium",
          [](const std::vector<std::pair<double, double>>& agents, int horizon, double tol, int max_iters) {
              return equilibrium_dict(solve_equilibrium(to_economy(agents, horizon), {tol, max_iters, 0}));
          },
          py::arg("agents"), py::arg("horizon"), py::arg("tol") = 1e-10, py::arg("max_iters") = 1'000'000);
    m.def("verify_equilibrium",
          [](const std::vector<std::pair<double, double>>& agents, int horizon, const Values& prices,
             const Allocation& x, double tol) {
              return report_dict(verify_equilibrium(to_economy(agents, horizon), prices, x, tol));
          },
          py::arg("agents"), py::arg("horizon"), py::arg("prices"), py::arg("allocation"), py::arg("tol") = 1e-10);
    m.def("uniqueness_probe",
          [](const std::vector<std::pair<double, double>>& agents, int horizon, int n_starts, double tol) {
              return uniqueness_probe(to_economy(agents, horizon), n_starts, tol);
          },
          py::arg("agents"), py::arg("horizon"), py::arg("n_starts") = 5, py::arg("tol") = 1e-10);
}
