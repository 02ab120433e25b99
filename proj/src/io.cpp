#include "impatience/io.hpp"

#include "impatience/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace impatience::io {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& text, int line_no) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::ParseError, fmt::format("line {}: '{}' is not a number", line_no, text));
    }
    return value;
}

long parse_index(const std::string& text, int line_no) {
    long value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(ErrorCode::ParseError, fmt::format("line {}: '{}' is not an integer period", line_no, text));
    }
    return value;
}

// Shared reader: header with a leading `t` column and `columns` value columns (0 = any >= 1).
std::vector<std::vector<double>> read_table(std::istream& in, std::size_t columns) {
    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split(trim(line));
            break;
        }
    }
    if (header.empty() || header.front() != "t") {
        throw Error(ErrorCode::ParseError, "missing header starting with 't'");
    }
    const std::size_t width = header.size() - 1;
    if (width == 0 || (columns != 0 && width != columns)) {
        throw Error(ErrorCode::ParseError, fmt::format("unexpected header with {} value columns", width));
    }
    std::vector<std::vector<double>> table(width);
    long expected = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = trim(line);
        if (row.empty()) continue;
        const auto fields = split(row);
        if (fields.size() != width + 1) {
            throw Error(ErrorCode::ParseError, fmt::format("line {}: expected {} fields", line_no, width + 1));
        }
        const long t = parse_index(fields[0], line_no);
        if (t != expected) {
            throw Error(ErrorCode::ParseError,
                        fmt::format("line {}: period {} where {} was expected (gap or duplicate)", line_no, t, expected));
        }
        ++expected;
        for (std::size_t c = 0; c < width; ++c) table[c].push_back(parse_double(fields[c + 1], line_no));
    }
    if (expected == 0) {
        throw Error(ErrorCode::ParseError, "no data rows");
    }
    return table;
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    }
    return in;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::vector<double> read_sequence_csv(std::istream& in) { return read_table(in, 1).front(); }

std::vector<double> read_sequence_csv(const std::filesystem::path& path) {
    auto in = open(path);
    return read_sequence_csv(in);
}

void write_sequence_csv(std::ostream& out, std::span<const double> values, const std::string& column) {
    out << "t," << column << '\n';
    for (std::size_t t = 0; t < values.size(); ++t) out << t << ',' << format_double(values[t]) << '\n';
}

std::vector<std::vector<double>> read_profile_csv(std::istream& in) { return read_table(in, 0); }

std::vector<std::vector<double>> read_profile_csv(const std::filesystem::path& path) {
    auto in = open(path);
    return read_profile_csv(in);
}

void write_profile_csv(std::ostream& out, const std::vector<std::vector<double>>& members) {
    out << 't';
    for (std::size_t i = 0; i < members.size(); ++i) out << ",member_" << i + 1;
    out << '\n';
    const std::size_t periods = members.empty() ? 0 : members.front().size();
    for (std::size_t t = 0; t < periods; ++t) {
        out << t;
        for (const auto& m : members) out << ',' << format_double(m[t]);
        out << '\n';
    }
}

void write_allocation_csv(std::ostream& out, const Allocation& x) {
    out << 't';
    for (Eigen::Index i = 0; i < x.rows(); ++i) out << ",agent_" << i + 1;
    out << '\n';
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
        out << t;
        for (Eigen::Index i = 0; i < x.rows(); ++i) out << ',' << format_double(x(i, t));
        out << '\n';
    }
}

Allocation read_allocation_csv(std::istream& in) {
    const auto table = read_table(in, 0);
    Allocation x(static_cast<Eigen::Index>(table.size()), static_cast<Eigen::Index>(table.front().size()));
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t t = 0; t < table[i].size(); ++t) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = table[i][t];
        }
    }
    return x;
}

Allocation read_allocation_csv(const std::filesystem::path& path) {
    auto in = open(path);
    return read_allocation_csv(in);
}

Economy economy_from_json(const nlohmann::json& doc) {
    try {
        std::vector<ExponentialAgent> agents;
        for (const auto& a : doc.at("agents")) {
            agents.push_back({a.at("delta").get<double>(), a.at("wealth").get<double>()});
        }
        return Economy(std::move(agents), doc.at("horizon").get<int>());
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("economy document: ") + ex.what());
    }
}

nlohmann::json economy_to_json(const Economy& e) {
    nlohmann::json agents = nlohmann::json::array();
    for (const auto& a : e.agents()) agents.push_back({{"delta", a.delta}, {"wealth", a.wealth}});
    return {{"horizon", e.horizon()}, {"agents", std::move(agents)}};
}

nlohmann::json equilibrium_to_json(const EquilibriumResult& r) {
    nlohmann::json allocation = nlohmann::json::array();
    for (Eigen::Index i = 0; i < r.allocation.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(r.allocation.cols()));
        for (Eigen::Index t = 0; t < r.allocation.cols(); ++t) row[static_cast<std::size_t>(t)] = r.allocation(i, t);
        allocation.push_back(row);
    }
    return {{"prices", r.prices},
            {"allocation", std::move(allocation)},
            {"join_weights", r.join_weights},
            {"utility_weights", r.utility_weights},
            {"supports", r.supports},
            {"iterations", r.iterations},
            {"residual", r.residual}};
}

nlohmann::json verification_to_json(const VerificationReport& r) {
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations) {
        violations.push_back({{"kind", to_string(v.kind)}, {"agent", v.agent}, {"period", v.period}, {"amount", v.amount}});
    }
    return {{"passed", r.passed},
            {"max_budget_error", r.max_budget_error},
            {"max_optimality_gap", r.max_optimality_gap},
            {"max_supply_error", r.max_supply_error},
            {"violations", std::move(violations)}};
}

nlohmann::json decomposition_to_json(const Decomposition& d) {
    nlohmann::json components = nlohmann::json::array();
    for (const auto& c : d.components) {
        components.push_back({{"beta", c.beta}, {"delta", c.delta}, {"switch", c.switch_period}, {"eta", c.eta}});
    }
    return {{"horizon", d.horizon}, {"scale", d.scale}, {"gamma", d.gamma}, {"components", std::move(components)}};
}

Decomposition decomposition_from_json(const nlohmann::json& doc) {
    try {
        Decomposition d;
        d.horizon = doc.at("horizon").get<int>();
        d.scale = doc.at("scale").get<double>();
        d.gamma = doc.at("gamma").get<double>();
        for (const auto& c : doc.at("components")) {
            d.components.push_back({c.at("beta").get<double>(), c.at("delta").get<double>(),
                                    c.at("switch").get<int>(), c.at("eta").get<double>()});
        }
        return d;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, std::string("decomposition document: ") + ex.what());
    }
}

nlohmann::json read_json(const std::filesystem::path& path) {
    auto in = open(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + ex.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::ParseError, "cannot write " + path.string());
    }
    out << text;
}

}  // namespace impatience::io
