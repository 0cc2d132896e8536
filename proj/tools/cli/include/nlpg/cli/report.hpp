#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlpg::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Tabular output of one run. Metadata pairs become `# key=value` lines in
/// CSV and a "config" object in JSON; rows keep sweep order.
struct Report {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;   ///< free-form lines (failures, fitted rates)

    void add_row(std::vector<Cell> row);
};

enum class Format { Csv, Json };

Format parse_format(const std::string& s);

void write_csv(std::ostream& os, const Report& r);
void write_json(std::ostream& os, const Report& r);

/// Writes to stdout when `output` is empty, to `output` when it ends in
/// .csv or .json, and to `output/<scenario>.<ext>` otherwise.
void emit(const Report& r, const std::string& output, Format fmt);

/// %.11e, with nan and inf spelled the way gnuplot reads them.
std::string format_double(double v);

}  // namespace nlpg::cli
