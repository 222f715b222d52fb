#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "spatcorr/cli.hpp"

namespace spatcorr::cli {

namespace {

constexpr const char* kWhere = "cli/ingest_csv";

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    const char* begin = cell.data();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        auto item = trim(std::string_view(text).substr(start, pos - start));
        if (!item.empty()) out.push_back(item);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

IngestResult parse_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::Format, kWhere, source + ": missing header row");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const auto header = split_cells(line);

    std::optional<std::size_t> id_col, x_col, y_col, stratum_col;
    std::vector<std::pair<std::string, std::size_t>> var_cols;
    std::set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto& h = header[c];
        if (h.empty()) throw Error(ErrorKind::Format, kWhere, source + ": empty column name in header");
        if (!seen.insert(h).second) throw Error(ErrorKind::Format, kWhere, source + ": duplicate column '" + h + "'");
        if (h == "id") id_col = c;
        else if (h == "x") x_col = c;
        else if (h == "y") y_col = c;
        else if (h == "stratum") stratum_col = c;
        else var_cols.emplace_back(h, c);
    }
    for (const auto& [name, col] : {std::pair{"id", id_col}, std::pair{"x", x_col}, std::pair{"y", y_col}})
        if (!col) throw Error(ErrorKind::Format, kWhere, source + ": missing required column '" + name + "'");

    IngestResult result;
    std::vector<SampleRow> rows;
    std::set<std::string> ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_cells(line);
        auto reject = [&](const std::string& why) {
            ++result.rejected_rows;
            result.warnings.push_back(fmt::format("{}:{}: row rejected ({})", source, line_no, why));
        };
        if (cells.size() != header.size()) {
            reject(fmt::format("{} cells, header has {}", cells.size(), header.size()));
            continue;
        }
        SampleRow row;
        row.id = cells[*id_col];
        if (row.id.empty()) {
            reject("blank id");
            continue;
        }
        auto x = parse_number(cells[*x_col]);
        auto y = parse_number(cells[*y_col]);
        if (!x || !y) {
            reject("blank or non-numeric coordinate");
            continue;
        }
        row.x = *x;
        row.y = *y;
        bool ok = true;
        for (const auto& [name, col] : var_cols) {
            auto v = parse_number(cells[col]);
            if (!v) {
                reject("blank or non-numeric value for '" + name + "'");
                ok = false;
                break;
            }
            row.values[name] = *v;
        }
        if (!ok) continue;
        if (stratum_col && !cells[*stratum_col].empty()) row.stratum_override = cells[*stratum_col];
        if (!ids.insert(row.id).second)
            throw Error(ErrorKind::Format, kWhere, fmt::format("{}:{}: duplicate id '{}'", source, line_no, row.id));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::EmptyInput, kWhere, source + ": no valid rows");
    if (result.rejected_rows > 0)
        result.warnings.push_back(fmt::format("{}: {} row(s) rejected for missing or non-numeric cells", source,
                                              result.rejected_rows));

    std::vector<std::string> variables;
    for (const auto& [name, col] : var_cols) variables.push_back(name);
    result.table = SampleTable(std::move(variables), std::move(rows));
    return result;
}

IngestResult ingest_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, kWhere, "cannot open '" + path + "'");
    return parse_csv(in, path);
}

void write_csv(const SampleTable& table, std::ostream& out) {
    bool with_stratum = false;
    for (const auto& row : table.rows()) with_stratum |= row.stratum_override.has_value();
    out << "id,x,y";
    for (const auto& v : table.variables()) out << ',' << v;
    if (with_stratum) out << ",stratum";
    out << '\n';
    for (const auto& row : table.rows()) {
        out << row.id << ',' << fmt::format("{:.17g}", row.x) << ',' << fmt::format("{:.17g}", row.y);
        for (const auto& v : table.variables()) out << ',' << fmt::format("{:.17g}", row.values.at(v));
        if (with_stratum) out << ',' << row.stratum_override.value_or("");
        out << '\n';
    }
}

}  // namespace spatcorr::cli
