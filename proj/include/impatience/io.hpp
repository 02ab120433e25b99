#pragma once

#include "impatience/decompose.hpp"
#include "impatience/market.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace impatience::io {

/// `%.17g`: 17 significant digits, enough to read back the same double.
std::string format_double(double value);

/// Reads `t,value` CSV with t = 0, 1, 2, ... in order. Throws Error{ParseError}.
std::vector<double> read_sequence_csv(std::istream& in);
std::vector<double> read_sequence_csv(const std::filesystem::path& path);

void write_sequence_csv(std::ostream& out, std::span<const double> values, const std::string& column = "value");

/// Reads `t,member_1,...,member_m`; returns one sequence per member.
std::vector<std::vector<double>> read_profile_csv(std::istream& in);
std::vector<std::vector<double>> read_profile_csv(const std::filesystem::path& path);

void write_profile_csv(std::ostream& out, const std::vector<std::vector<double>>& members);

/// `t,agent_1,...,agent_n` with one row per period.
void write_allocation_csv(std::ostream& out, const Allocation& x);
Allocation read_allocation_csv(std::istream& in);
Allocation read_allocation_csv(const std::filesystem::path& path);

/// {"horizon": T, "agents": [{"delta": d, "wealth": w}, ...]}
Economy economy_from_json(const nlohmann::json& doc);
nlohmann::json economy_to_json(const Economy& e);

nlohmann::json equilibrium_to_json(const EquilibriumResult& r);
nlohmann::json verification_to_json(const VerificationReport& r);

nlohmann::json decomposition_to_json(const Decomposition& d);
/// Reads scale, gamma, horizon and components; intermediates are not restored.
Decomposition decomposition_from_json(const nlohmann::json& doc);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace impatience::io
