// impatience: command-line front end for discount-factor analysis, beta-delta
// decomposition, geometric aggregation and parimutuel markets.
//
// Exit codes: 0 success / property holds, 1 property falsified or verification
// failed, 2 malformed input.

#include "impatience/aggregate.hpp"
#include "impatience/decompose.hpp"
#include "impatience/discount.hpp"
#include "impatience/error.hpp"
#include "impatience/io.hpp"
#include "impatience/market.hpp"
#include "impatience/selftest.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace imp = impatience;
using imp::io::format_double;

namespace {

constexpr int kOk = 0;
constexpr int kFalsified = 1;
constexpr int kBadInput = 2;

struct RunConfig {
    double tol = 1e-10;
    std::uint64_t seed = 0;
    int horizon = -1;  ///< truncation override; -1 keeps the input horizon
    std::string output;
};

int exit_code_for(imp::ErrorCode code) {
    switch (code) {
        case imp::ErrorCode::NotDecreasingImpatience:
        case imp::ErrorCode::TailRatioTooCloseToOne:
        case imp::ErrorCode::NotStrictlyDecreasing:
        case imp::ErrorCode::NoConvergence:
        case imp::ErrorCode::EmptySupport:
        case imp::ErrorCode::NotConcave:
            return kFalsified;
        default:
            return kBadInput;
    }
}

std::vector<double> truncate(std::vector<double> values, int horizon) {
    if (horizon >= 0 && static_cast<std::size_t>(horizon) + 1 < values.size()) {
        values.resize(static_cast<std::size_t>(horizon) + 1);
    }
    return values;
}

// Writes to the --output file when given, otherwise to stdout.
void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
    } else {
        imp::io::write_text(cfg.output, text);
    }
}

std::string sequence_csv(const std::vector<double>& values, const std::string& column = "value") {
    std::ostringstream out;
    imp::io::write_sequence_csv(out, values, column);
    return out.str();
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
    return s;
}

int cmd_check(const RunConfig& cfg, const std::string& input) {
    const imp::DiscountFactor f(truncate(imp::io::read_sequence_csv(input), cfg.horizon));
    const bool stationary = imp::is_stationary(f, cfg.tol);
    const bool di = imp::is_decreasing_impatience(f, cfg.tol);
    const bool ii = imp::is_increasing_impatience(f, cfg.tol);
    fmt::print("horizon: {}\n", f.horizon());
    fmt::print("ratios: {}\n", join(imp::impatience_ratios(f)));
    fmt::print("stationary: {}\n", stationary);
    fmt::print("DI: {}\n", di);
    fmt::print("increasing impatience: {}\n", ii);
    if (di) return kOk;

    if (const auto failure = imp::first_log_convexity_failure(f, cfg.tol)) {
        fmt::print("log-convexity fails on periods {}..{}\n", *failure, *failure + 2);
    }
    if (const auto w = imp::find_convexity_violation(f)) {
        const int t = w->period;
        const double gross = 1.0 + w->rate;
        fmt::print("witness: t={} r={} lhs={} rhs={}\n", t, format_double(w->rate), format_double(w->lhs),
                   format_double(w->rhs));
        fmt::print("lab question (k=1): would you rather receive {} at t={} and {} at t={}, or {} at t={}?\n",
                   format_double(0.5 * std::pow(gross, t - 1)), t - 1, format_double(0.5 * std::pow(gross, t + 1)),
                   t + 1, format_double(std::pow(gross, t)), t);
        fmt::print("decreasing impatience predicts the split; this factor prefers the lump.\n");
    }
    return kFalsified;
}

int cmd_decompose(const RunConfig& cfg, const std::string& input, const std::string& h_csv,
                  const std::string& alpha_csv, const std::string& reconstruct_from) {
    if (!reconstruct_from.empty()) {
        const auto d = imp::io::decomposition_from_json(imp::io::read_json(reconstruct_from));
        const int horizon = cfg.horizon >= 0 ? cfg.horizon : d.horizon;
        emit(cfg, sequence_csv(imp::reconstruct(d, horizon).vector()));
        return kOk;
    }
    if (input.empty()) {
        throw imp::Error(imp::ErrorCode::ParseError, "decompose needs an input CSV or --reconstruct");
    }
    const imp::DiscountFactor f(truncate(imp::io::read_sequence_csv(input), cfg.horizon));
    const auto d = imp::decompose(f);
    const auto rebuilt = imp::reconstruct(d, f.horizon());
    double err = 0.0;
    for (std::size_t t = 0; t < f.size(); ++t) err = std::max(err, std::abs(rebuilt[t] / f[t] - 1.0));

    emit(cfg, imp::io::decomposition_to_json(d).dump(2) + "\n");
    if (!h_csv.empty()) imp::io::write_text(h_csv, sequence_csv(d.h, "h"));
    if (!alpha_csv.empty()) imp::io::write_text(alpha_csv, sequence_csv(d.basis.alpha, "alpha"));
    std::cerr << fmt::format("components: {}\nmax relative reconstruction error: {}\n", d.components.size(),
                             format_double(err));
    return err > 1e-9 ? kFalsified : kOk;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw imp::Error(imp::ErrorCode::InvalidWeights, "cannot parse weight '" + item + "'");
        }
    }
    return values;
}

imp::Profile load_profile(const RunConfig& cfg, const std::string& path) {
    std::vector<imp::NormalizedFactor> members;
    for (auto& column : imp::io::read_profile_csv(path)) {
        members.push_back(imp::normalize(imp::DiscountFactor(truncate(std::move(column), cfg.horizon))));
    }
    return imp::Profile(std::move(members));
}

int cmd_aggregate(const RunConfig& cfg, const std::string& input, const std::string& eta, bool check,
                  const std::string& fit_target) {
    const auto profile = load_profile(cfg, input);
    const auto weights = eta.empty() ? imp::Weights::uniform(profile.size()) : imp::Weights(parse_list(eta));
    const auto social = imp::geometric_mean(profile, weights);
    emit(cfg, sequence_csv(social.vector()));

    int code = kOk;
    if (check) {
        const auto report = imp::run_axiom_suite(imp::make_geometric_mean(weights), profile, cfg.tol);
        auto line = [](const char* name, bool ok, int n) {
            std::cerr << fmt::format("{}: {} ({} checks)\n", name, ok ? "pass" : "fail", n);
        };
        line("pareto", report.pareto, report.pareto_checks);
        line("iia", report.iia, report.iia_checks);
        line("time-consistency", report.time_consistency, report.time_consistency_checks);
        std::cerr << fmt::format("summable: {}\n", imp::summability_check(social));
        if (!report.all()) code = kFalsified;
    }
    if (!fit_target.empty()) {
        const auto target = imp::normalize(imp::DiscountFactor(imp::io::read_sequence_csv(fit_target)));
        std::cerr << "fitted eta (least squares, diagnostic): " << join(imp::fit_geometric_weights(profile, target))
                  << '\n';
    }
    return code;
}

void write_market_outputs(const RunConfig& cfg, const imp::Economy& e, const imp::EquilibriumResult& r,
                          const imp::VerificationReport& report) {
    nlohmann::json doc{{"economy", imp::io::economy_to_json(e)},
                       {"equilibrium", imp::io::equilibrium_to_json(r)},
                       {"verification", imp::io::verification_to_json(report)}};
    if (cfg.output.empty()) {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    imp::io::write_text(cfg.output + ".economy.json", imp::io::economy_to_json(e).dump(2) + "\n");
    imp::io::write_text(cfg.output + ".equilibrium.json", doc.dump(2) + "\n");
    imp::io::write_text(cfg.output + ".prices.csv", sequence_csv(r.prices, "price"));
    std::ostringstream alloc;
    imp::io::write_allocation_csv(alloc, r.allocation);
    imp::io::write_text(cfg.output + ".allocation.csv", alloc.str());
}

int cmd_market_synthesize(const RunConfig& cfg, const std::string& input) {
    const imp::DiscountFactor f(truncate(imp::io::read_sequence_csv(input), cfg.horizon));
    const auto [economy, eq] = imp::synthesize_economy(f);
    const auto report = imp::verify_equilibrium(economy, eq.prices, eq.allocation, cfg.tol);
    write_market_outputs(cfg, economy, eq, report);
    std::cerr << fmt::format("agents: {}\nverification: {}\n", economy.size(), report.passed ? "pass" : "fail");
    return report.passed ? kOk : kFalsified;
}

int cmd_market_solve(const RunConfig& cfg, const std::string& input, int max_iters, int starts) {
    auto economy = imp::io::economy_from_json(imp::io::read_json(input));
    if (cfg.horizon >= 0) economy = imp::Economy(economy.agents(), cfg.horizon);
    const auto eq = imp::solve_equilibrium(economy, {cfg.tol, max_iters, 0});
    const auto report = imp::verify_equilibrium(economy, eq.prices, eq.allocation, cfg.tol);
    write_market_outputs(cfg, economy, eq, report);
    std::cerr << fmt::format("iterations: {}\nresidual: {}\nverification: {}\n", eq.iterations,
                             format_double(eq.residual), report.passed ? "pass" : "fail");
    if (starts > 1) {
        const double spread = imp::uniqueness_probe(economy, starts, cfg.tol);
        std::cerr << fmt::format("uniqueness probe ({} starts): {}\n", starts, format_double(spread));
    }
    return report.passed ? kOk : kFalsified;
}

int cmd_market_verify(const RunConfig& cfg, const std::string& economy_path, const std::string& prices_path,
                      const std::string& allocation_path) {
    const auto economy = imp::io::economy_from_json(imp::io::read_json(economy_path));
    const auto prices = imp::io::read_sequence_csv(prices_path);
    const auto x = imp::io::read_allocation_csv(allocation_path);
    const auto report = imp::verify_equilibrium(economy, prices, x, cfg.tol);
    emit(cfg, imp::io::verification_to_json(report).dump(2) + "\n");
    std::cerr << "verification: " << (report.passed ? "pass" : "fail") << '\n';
    return report.passed ? kOk : kFalsified;
}

std::vector<imp::WeightedExponential> parse_pairs(const std::vector<std::string>& specs) {
    std::vector<imp::WeightedExponential> pairs;
    for (const auto& spec : specs) {
        const auto values = parse_list(spec);
        if (values.size() != 2) {
            throw imp::Error(imp::ErrorCode::ParseError, "--pair expects alpha,delta (got '" + spec + "')");
        }
        pairs.push_back({values[0], values[1]});
    }
    return pairs;
}

int cmd_market_envelope(const RunConfig& cfg, const std::vector<std::string>& pair_specs) {
    auto pairs = parse_pairs(pair_specs);
    if (pairs.empty()) pairs = {{1.0, 0.3}, {0.65, 0.6}, {0.3, 0.8}};
    const int horizon = cfg.horizon >= 0 ? cfg.horizon : 10;
    const auto prices = imp::envelope_prices(pairs, horizon);
    const auto leaders = imp::envelope_leaders(pairs, horizon);
    std::ostringstream out;
    out << "t,price,leader";
    for (std::size_t i = 0; i < pairs.size(); ++i) out << ",branch_" << i + 1;
    out << '\n';
    for (int t = 0; t <= horizon; ++t) {
        const auto ut = static_cast<std::size_t>(t);
        out << t << ',' << format_double(prices[ut]) << ',' << leaders[ut] + 1;
        for (const auto& p : pairs) out << ',' << format_double(p.alpha * std::pow(p.delta, t));
        out << '\n';
    }
    emit(cfg, out.str());
    return kOk;
}

int cmd_selftest(const RunConfig& cfg, double size_factor, int jobs, bool expect_fail) {
    imp::SelftestOptions options;
    options.seed = cfg.seed;
    options.size_factor = size_factor;
    options.jobs = jobs;
    options.inject_non_di = expect_fail;
    const auto results = imp::run_selftest(options);
    bool all = true;
    for (const auto& r : results) {
        fmt::print("{:<44} {} cases={} failures={} max_residual={:.3e}\n", r.name, r.passed() ? "PASS" : "FAIL",
                   r.cases, r.failures, r.max_residual);
        all = all && r.passed();
    }
    if (expect_fail) {
        fmt::print("negative control: {}\n", all ? "NOT detected" : "detected");
        return all ? kFalsified : kOk;
    }
    return all ? kOk : kFalsified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decreasing impatience: detection, beta-delta decomposition, aggregation and parimutuel markets"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--tol", cfg.tol, "Numerical tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Seed for random instance generation");
    app.add_option("--horizon", cfg.horizon, "Horizon override (truncation / envelope length)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--output,-o", cfg.output, "Output file (or prefix for market outputs)");

    std::string input;
    auto* check = app.add_subcommand("check", "Decide decreasing impatience and print a falsifying witness");
    check->add_option("input", input, "t,value CSV")->required();
    check->fallthrough();

    std::string h_csv, alpha_csv, reconstruct_from;
    auto* decompose = app.add_subcommand("decompose", "Geometric mean of generalized beta-delta factors");
    decompose->add_option("input", input, "t,value CSV");
    decompose->add_option("--h-csv", h_csv, "Write the concave sequence h");
    decompose->add_option("--alpha-csv", alpha_csv, "Write the min-basis weights");
    decompose->add_option("--reconstruct", reconstruct_from, "Rebuild the factor from a decomposition document");
    decompose->fallthrough();

    std::string eta, fit_target;
    bool axiom_check = false;
    auto* aggregate = app.add_subcommand("aggregate", "Geometric-mean aggregation of a profile");
    aggregate->add_option("input", input, "t,member_1,...,member_m CSV")->required();
    aggregate->add_option("--eta", eta, "Comma-separated weights (default uniform)");
    aggregate->add_flag("--check", axiom_check, "Run the Pareto / IIA / time-consistency suites");
    aggregate->add_option("--fit", fit_target, "Fit geometric weights to an aggregate factor CSV");
    aggregate->fallthrough();

    auto* market = app.add_subcommand("market", "Parimutuel markets of exponential discounters");
    market->require_subcommand(1);
    market->fallthrough();
    auto* synthesize = market->add_subcommand("synthesize", "Economy whose equilibrium prices are the factor");
    synthesize->add_option("input", input, "t,value CSV")->required();
    synthesize->fallthrough();
    int max_iters = 1'000'000;
    int starts = 1;
    auto* solve = market->add_subcommand("solve", "Eisenberg-Gale equilibrium of an economy");
    solve->add_option("input", input, "Economy JSON")->required();
    solve->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    solve->add_option("--starts", starts, "Run the uniqueness probe from this many starts")->check(CLI::PositiveNumber);
    solve->fallthrough();
    std::string prices_path, allocation_path;
    auto* verify = market->add_subcommand("verify", "Check a candidate equilibrium");
    verify->add_option("economy", input, "Economy JSON")->required();
    verify->add_option("prices", prices_path, "t,price CSV")->required();
    verify->add_option("allocation", allocation_path, "t,agent_1,... CSV")->required();
    verify->fallthrough();
    std::vector<std::string> pair_specs;
    auto* envelope = market->add_subcommand("envelope", "Upper envelope of scaled exponentials (CSV)");
    envelope->add_option("--pair", pair_specs, "alpha,delta (repeatable; default: the three-agent example)");
    envelope->fallthrough();

    double size_factor = 1.0;
    int jobs = 1;
    bool expect_fail = false;
    auto* selftest = app.add_subcommand("selftest", "Run every property suite");
    selftest->add_option("--size-factor", size_factor, "Scale the instance counts")->check(CLI::PositiveNumber);
    selftest->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    selftest->add_flag("--expect-fail", expect_fail, "Inject a non-DI fixture; succeed only if it is caught");
    selftest->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (*check) return cmd_check(cfg, input);
        if (*decompose) return cmd_decompose(cfg, input, h_csv, alpha_csv, reconstruct_from);
        if (*aggregate) return cmd_aggregate(cfg, input, eta, axiom_check, fit_target);
        if (*synthesize) return cmd_market_synthesize(cfg, input);
        if (*solve) return cmd_market_solve(cfg, input, max_iters, starts);
        if (*verify) return cmd_market_verify(cfg, input, prices_path, allocation_path);
        if (*envelope) return cmd_market_envelope(cfg, pair_specs);
        if (*selftest) return cmd_selftest(cfg, size_factor, jobs, expect_fail);
    } catch (const imp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return kBadInput;
}
