#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "remcorr/chain_model.hpp"
#include "remcorr/correlations.hpp"
#include "remcorr/optimizer.hpp"
#include "remcorr/sweep_engine.hpp"

namespace remcorr::io {

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// 12 significant digits, '.' separator, locale independent; -0 prints as 0.
[[nodiscard]] std::string format_number(double value);

void write_csv(const Table& table, std::ostream& out);
/// `path` empty or "-" writes to stdout. Throws std::runtime_error if the file cannot be written.
void emit_csv(const Table& table, const std::string& path);

void write_json(const nlohmann::json& doc, std::ostream& out);
void emit_json(const nlohmann::json& doc, const std::string& path);

struct ParsedCsv {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

[[nodiscard]] ParsedCsv read_csv(std::istream& in);
[[nodiscard]] double parse_number(const std::string& text);

// Schemas for each experiment.
[[nodiscard]] Table profile_table(const CouplingProfile& profile);
[[nodiscard]] Table curves_table(const std::vector<CurveRow>& rows);
[[nodiscard]] Table optimum_table(const std::vector<TimeOptimum>& optima);
[[nodiscard]] Table scaling_table(const ScalingResult& result);
[[nodiscard]] Table sweep_table(const std::vector<SweepPoint>& points);
/// Sweep columns prefixed by a `domain` column, D1..D4 in order.
[[nodiscard]] Table map_table(const SweepsByDomain& sweeps);

[[nodiscard]] nlohmann::json fit_json(int n, const std::vector<TimeOptimum>& optima, const FitResult& fit);
[[nodiscard]] nlohmann::json scaling_json(const ScalingResult& result);
[[nodiscard]] nlohmann::json coverage_json(const MapExperiment& experiment);

}  // namespace remcorr::io
