#include "remcorr/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace remcorr::io {

namespace {

std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& value) -> std::string {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_number(value);
            } else if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(value);
            } else {
                return value;
            }
        },
        cell);
}

template <typename Writer>
void with_output(const std::string& path, Writer write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write(file);
    file.flush();
    if (!file) {
        throw std::runtime_error("failed writing " + path);
    }
}

// JSON numbers go through the same 12-digit formatting as CSV.
double rounded(double value) {
    return parse_number(format_number(value));
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("table row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
    return {buffer, result.ptr};
}

void write_csv(const Table& table, std::ostream& out) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_cell(row[c]);
        }
        out << '\n';
    }
}

void emit_csv(const Table& table, const std::string& path) {
    with_output(path, [&](std::ostream& out) { write_csv(table, out); });
}

void write_json(const nlohmann::json& doc, std::ostream& out) {
    out << doc.dump(2) << '\n';
}

void emit_json(const nlohmann::json& doc, const std::string& path) {
    with_output(path, [&](std::ostream& out) { write_json(doc, out); });
}

ParsedCsv read_csv(std::istream& in) {
    ParsedCsv parsed;
    std::string line;
    const auto split = [](const std::string& text) {
        std::vector<std::string> fields;
        std::stringstream stream(text);
        std::string field;
        while (std::getline(stream, field, ',')) {
            fields.push_back(field);
        }
        return fields;
    };
    if (!std::getline(in, line)) {
        return parsed;
    }
    parsed.columns = split(line);
    while (std::getline(in, line)) {
        if (!line.empty()) {
            parsed.rows.push_back(split(line));
        }
    }
    return parsed;
}

double parse_number(const std::string& text) {
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return value;
}

Table profile_table(const CouplingProfile& profile) {
    Table table{{"i", "d"}, {}};
    for (int i = 1; i < profile.spec().n(); ++i) {
        table.add_row({static_cast<long long>(i), profile[i]});
    }
    return table;
}

Table curves_table(const std::vector<CurveRow>& rows) {
    Table table{{"r_sq", "r_nm1_sq", "q_ext", "q_r"}, {}};
    for (const auto& row : rows) {
        table.add_row({row.r_sq, row.r_nm1_sq, row.q_ext, row.q_r});
    }
    return table;
}

Table optimum_table(const std::vector<TimeOptimum>& optima) {
    Table table{{"n", "phi", "t0", "r2max"}, {}};
    for (const auto& optimum : optima) {
        table.add_row({static_cast<long long>(optimum.spec.n()), optimum.spec.phi(), optimum.t0, optimum.r2max});
    }
    return table;
}

Table scaling_table(const ScalingResult& result) {
    Table table{{"n", "t0", "r2max"}, {}};
    for (const auto& point : result.points) {
        table.add_row({static_cast<long long>(point.n), point.t0, point.r2max});
    }
    return table;
}

Table sweep_table(const std::vector<SweepPoint>& points) {
    Table table{{"alpha1", "alpha2", "q_r", "q_ext", "rsq", "rsq_nm1"}, {}};
    for (const auto& p : points) {
        table.add_row({p.alpha1, p.alpha2, p.q_r, p.q_ext, p.rsq, p.rsq_nm1});
    }
    return table;
}

Table map_table(const SweepsByDomain& sweeps) {
    Table table{{"domain", "alpha1", "alpha2", "q_r", "q_ext", "rsq", "rsq_nm1"}, {}};
    for (const auto id : quadrants) {
        const auto found = sweeps.find(id);
        if (found == sweeps.end()) {
            continue;
        }
        for (const auto& p : found->second) {
            table.add_row({std::string(to_string(id)), p.alpha1, p.alpha2, p.q_r, p.q_ext, p.rsq, p.rsq_nm1});
        }
    }
    return table;
}

nlohmann::json fit_json(int n, const std::vector<TimeOptimum>& optima, const FitResult& fit) {
    nlohmann::json phi = nlohmann::json::array();
    nlohmann::json r2max = nlohmann::json::array();
    for (const auto& optimum : optima) {
        phi.push_back(rounded(optimum.spec.phi()));
        r2max.push_back(rounded(optimum.r2max));
    }
    return {
        {"n", n},
        {"a", rounded(fit.a)},
        {"b", rounded(fit.b)},
        {"c", rounded(fit.c)},
        {"residual", rounded(fit.residual)},
        {"converged", fit.converged},
        {"iterations", fit.iterations},
        {"phi", phi},
        {"r2max", r2max},
    };
}

nlohmann::json scaling_json(const ScalingResult& result) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& point : result.points) {
        points.push_back({{"n", point.n}, {"t0", rounded(point.t0)}});
    }
    return {
        {"phi", rounded(result.phi)},
        {"gamma", rounded(result.gamma)},
        {"intercept", rounded(result.intercept)},
        {"r_squared", rounded(result.r_squared_stat)},
        {"points", points},
    };
}

nlohmann::json coverage_json(const MapExperiment& experiment) {
    const auto& report = experiment.coverage;
    nlohmann::json histogram = nlohmann::json::object();
    for (std::size_t k = 0; k < report.multiplicity_histogram.size(); ++k) {
        histogram[std::to_string(k + 1)] = report.multiplicity_histogram[k];
    }
    return {
        {"n", experiment.optimum.spec.n()},
        {"phi", rounded(experiment.optimum.spec.phi())},
        {"t0", rounded(experiment.optimum.t0)},
        {"r2max", rounded(experiment.optimum.r2max)},
        {"cell_size", rounded(report.cell_size)},
        {"occupied_cells", report.occupied_cells},
        {"area", rounded(report.area_estimate)},
        {"area_uncertainty", rounded(report.area_uncertainty)},
        {"multiplicity_histogram", histogram},
        {"d1_collisions", report.d1_collisions},
    };
}

}  // namespace remcorr::io
