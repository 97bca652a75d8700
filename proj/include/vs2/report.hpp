#pragma once

// Report rendering: aligned text tables, CSV, and JSON, each carrying a
// provenance block (config snapshot plus input-file digests) so a report can
// be traced back to the exact inputs that produced it.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <vs2/bon.hpp>
#include <vs2/jsonl.hpp>
#include <vs2/metrics.hpp>
#include <vs2/rng.hpp>

namespace vs2 {

// ---------------------------------------------------------------------------
// Formats

enum class ReportFormat { Table, Csv, Json };

inline const char* report_format_name(ReportFormat f) {
    switch (f) {
        case ReportFormat::Table: return "table";
        case ReportFormat::Csv: return "csv";
        case ReportFormat::Json: return "json";
    }
    return "";
}

inline std::optional<ReportFormat> report_format_from_string(std::string_view s) {
    if (s == "table") return ReportFormat::Table;
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Cell formatting

// Two-decimal fixed formatting; the convention for every reported number.
inline std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

inline std::string fmt2(const std::optional<double>& v) {
    return v ? fmt2(*v) : "-";
}

// ---------------------------------------------------------------------------
// Table / CSV rendering

class TextTable {
  public:
    explicit TextTable(std::vector<std::string> header)
        : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size())
            throw std::invalid_argument("table row width mismatch");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    // Space-padded columns: first column left-aligned, the rest
    // right-aligned, two-space gutters.
    std::string render() const {
        std::vector<std::size_t> width(header_.size());
        for (std::size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
        for (const auto& row : rows_)
            for (std::size_t c = 0; c < row.size(); ++c)
                width[c] = std::max(width[c], row[c].size());

        std::string out;
        auto emit = [&](const std::vector<std::string>& row) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c > 0) out += "  ";
                std::string pad(width[c] - row[c].size(), ' ');
                out += c == 0 ? row[c] + pad : pad + row[c];
            }
            out += '\n';
        };
        emit(header_);
        std::string rule;
        for (std::size_t c = 0; c < width.size(); ++c) {
            if (c > 0) rule += "  ";
            rule += std::string(width[c], '-');
        }
        out += rule + '\n';
        for (const auto& row : rows_) emit(row);
        return out;
    }

    std::string render_csv() const {
        auto escape = [](const std::string& cell) {
            if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
            std::string quoted = "\"";
            for (char ch : cell) {
                if (ch == '"') quoted += '"';
                quoted += ch;
            }
            return quoted + "\"";
        };
        std::string out;
        auto emit = [&](const std::vector<std::string>& row) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c > 0) out += ',';
                out += escape(row[c]);
            }
            out += '\n';
        };
        emit(header_);
        for (const auto& row : rows_) emit(row);
        return out;
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// ---------------------------------------------------------------------------
// Provenance

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct Provenance {
    json config = json::object();                      // effective run config
    std::map<std::string, std::string> input_digests;  // basename -> fnv1a64 hex
};

inline std::string path_basename(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

// Digests each input file's bytes; the config snapshot is embedded as-is.
inline Provenance make_provenance(const json& config,
                                  const std::vector<std::string>& input_paths) {
    Provenance p;
    p.config = config;
    for (const auto& path : input_paths)
        p.input_digests[path_basename(path)] = hex64(fnv1a64(read_file(path)));
    return p;
}

inline json to_json(const Provenance& p) {
    json inputs = json::object();
    for (const auto& [name, digest] : p.input_digests) inputs[name] = digest;
    return {{"config", p.config}, {"inputs", inputs}};
}

// Comment header for table/CSV outputs: one line for the config, one per
// input digest.  No timestamps — reports must be byte-stable.
inline std::string provenance_comment(const Provenance& p) {
    std::string out = "# config " + p.config.dump() + "\n";
    for (const auto& [name, digest] : p.input_digests)
        out += "# input " + name + " fnv1a64=" + digest + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Assembled documents

// Renders a table-shaped report in the requested format, with provenance as
// comment lines (table/csv) or an embedded object (json).
inline std::string render_report(const TextTable& table, const Provenance& prov,
                                 ReportFormat format, const json& report_json) {
    switch (format) {
        case ReportFormat::Table:
            return provenance_comment(prov) + table.render();
        case ReportFormat::Csv:
            return provenance_comment(prov) + table.render_csv();
        case ReportFormat::Json: {
            json doc = {{"provenance", to_json(prov)}, {"report", report_json}};
            return doc.dump(2) + "\n";
        }
    }
    throw std::logic_error("unreachable");
}

inline const std::array<std::string, 3>& dimension_column_names() {
    static const std::array<std::string, 3> names = {
        "visual_quality", "text_alignment", "physical_consistency"};
    return names;
}

// Point-score layout: one row per statistic, one column per dimension plus
// the average of the dimensions present.
inline TextTable pointscore_table(const PointScoreReport& r) {
    TextTable t({"metric", dimension_column_names()[0], dimension_column_names()[1],
                 dimension_column_names()[2], "average"});
    auto row = [&t](const char* name, const std::array<std::optional<double>, 3>& xs,
                    const std::optional<double>& avg) {
        t.add_row({name, fmt2(xs[0]), fmt2(xs[1]), fmt2(xs[2]), fmt2(avg)});
    };
    row("exact_acc", r.exact, r.exact_avg);
    row("relaxed_acc", r.relaxed, r.relaxed_avg);
    row("plcc_x100", r.plcc_x100, r.plcc_avg);
    return t;
}

inline json pointscore_json(const PointScoreReport& r) {
    auto dims = [](const std::array<std::optional<double>, 3>& xs,
                   const std::optional<double>& avg) {
        json j = json::object();
        for (std::size_t d = 0; d < 3; ++d)
            j[dimension_column_names()[d]] = xs[d] ? json(*xs[d]) : json();
        j["average"] = avg ? json(*avg) : json();
        return j;
    };
    return {{"exact_acc", dims(r.exact, r.exact_avg)},
            {"relaxed_acc", dims(r.relaxed, r.relaxed_avg)},
            {"plcc_x100", dims(r.plcc_x100, r.plcc_avg)},
            {"n", r.n}};
}

// Agreement layout: one row per dimension.
inline TextTable agreement_table(const std::array<AgreementReport, 3>& per_dim) {
    TextTable t({"dimension", "relaxed_match", "alpha", "n"});
    for (std::size_t d = 0; d < 3; ++d)
        t.add_row({dimension_column_names()[d], fmt2(per_dim[d].relaxed_match),
                   fmt2(per_dim[d].alpha), std::to_string(per_dim[d].n)});
    return t;
}

inline json agreement_json(const std::array<AgreementReport, 3>& per_dim) {
    json j = json::object();
    for (std::size_t d = 0; d < 3; ++d)
        j[dimension_column_names()[d]] = {{"relaxed_match", per_dim[d].relaxed_match},
                                          {"alpha", per_dim[d].alpha},
                                          {"n", per_dim[d].n}};
    return j;
}

// Preference layout: one row per dimension scope, both tie treatments.
struct PreferenceScopeResult {
    std::string scope;
    std::optional<double> acc_with_ties;
    std::optional<double> acc_without_ties;
    std::size_t n = 0;
    std::size_t n_gt_ties = 0;
};

inline TextTable preference_table(const std::vector<PreferenceScopeResult>& rows) {
    TextTable t({"scope", "acc_with_ties", "acc_without_ties", "n", "gt_ties"});
    for (const auto& r : rows)
        t.add_row({r.scope, fmt2(r.acc_with_ties), fmt2(r.acc_without_ties),
                   std::to_string(r.n), std::to_string(r.n_gt_ties)});
    return t;
}

inline json preference_json(const std::vector<PreferenceScopeResult>& rows) {
    json j = json::object();
    for (const auto& r : rows)
        j[r.scope] = {
            {"acc_with_ties", r.acc_with_ties ? json(*r.acc_with_ties) : json()},
            {"acc_without_ties",
             r.acc_without_ties ? json(*r.acc_without_ties) : json()},
            {"n", r.n},
            {"gt_ties", r.n_gt_ties}};
    return j;
}

// BoN layout: one row per external metric, both arms plus the delta.
inline TextTable bon_table(const BonReport& r) {
    TextTable t({"metric", "random", "bon", "delta"});
    for (const auto& m : r.metrics) {
        const BonArm& arm = r.per_metric.at(m);
        t.add_row({m, fmt2(arm.random_mean), fmt2(arm.bon_mean), fmt2(arm.delta)});
    }
    return t;
}

}  // namespace vs2
