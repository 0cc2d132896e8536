#include "nlpg/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "nlpg/errors.hpp"

namespace nlpg::cli {

void Report::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("report row width does not match the header");
    rows.push_back(std::move(row));
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return csv_field(std::get<std::string>(c));
}

}  // namespace

void write_csv(std::ostream& os, const Report& r) {
    os << "# scenario=" << r.scenario << '\n';
    for (const auto& [k, v] : r.meta) os << "# " << k << '=' << v << '\n';
    for (const auto& n : r.notes) os << "# " << n << '\n';
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Report& r) {
    nlohmann::ordered_json j;
    j["scenario"] = r.scenario;
    j["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.meta) j["config"][k] = v;
    j["notes"] = r.notes;
    j["columns"] = r.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) o[r.columns[i]] = v;
                        else o[r.columns[i]] = nullptr;
                    } else {
                        o[r.columns[i]] = v;
                    }
                },
                row[i]);
        }
        rows.push_back(std::move(o));
    }
    j["rows"] = std::move(rows);
    os << j.dump(2) << '\n';
}

void emit(const Report& r, const std::string& output, Format fmt) {
    if (output.empty()) {
        fmt == Format::Csv ? write_csv(std::cout, r) : write_json(std::cout, r);
        return;
    }
    namespace fs = std::filesystem;
    fs::path path(output);
    const std::string ext = path.extension().string();
    if (ext == ".csv" || ext == ".json") {
        fmt = ext == ".csv" ? Format::Csv : Format::Json;
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
    } else {
        fs::create_directories(path);
        path /= r.scenario + (fmt == Format::Csv ? ".csv" : ".json");
    }
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open output file " + path.string());
    fmt == Format::Csv ? write_csv(f, r) : write_json(f, r);
}

}  // namespace nlpg::cli
