#include "sdtest/cli/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "sdtest/error.hpp"

namespace sdtest::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

bool is_missing(std::string_view cell) {
    return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "NAN";
}

std::string location(const CsvTable& table, std::size_t row, std::size_t col) {
    // Row numbers count the header as row 1, matching what an editor shows.
    return table.source + ": row " + std::to_string(row + 2) + ", column '" +
           table.header[col] + "'";
}

Sample make_sample(std::vector<double> values, std::string label, const InputSpec& spec) {
    if (spec.returns_from_prices) values = log_returns(values);
    if (values.size() < 2) {
        throw ParseError("sample '" + label + "' has " + std::to_string(values.size()) +
                         " usable values; at least 2 are required");
    }
    return Sample(std::move(values), std::move(label));
}

std::vector<double> read_column(const CsvTable& table, std::size_t col, std::size_t& dropped) {
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto v = parse_cell(table.rows[r][col], location(table, r, col));
        if (v) {
            values.push_back(*v);
        } else {
            ++dropped;
        }
    }
    return values;
}

// Numeric levels sort numerically, otherwise lexicographically.
bool level_less(const std::string& a, const std::string& b) {
    double x = 0.0;
    double y = 0.0;
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
    const bool na = ra.ec == std::errc{} && ra.ptr == a.data() + a.size();
    const bool nb = rb.ec == std::errc{} && rb.ptr == b.data() + b.size();
    if (na && nb && x != y) return x < y;
    return a < b;
}

IngestResult ingest_long(const CsvTable& table, const InputSpec& spec) {
    const std::size_t group_col = table.column(*spec.by);
    std::size_t value_col = 0;
    if (!spec.columns.empty()) {
        value_col = table.column(spec.columns.front());
    } else {
        const auto it = std::find_if(table.header.begin(), table.header.end(),
                                     [&](const std::string& h) { return h != *spec.by; });
        if (it == table.header.end()) throw ParseError(table.source + ": no value column");
        value_col = static_cast<std::size_t>(it - table.header.begin());
    }

    IngestResult out;
    std::map<std::string, std::vector<double>, decltype(&level_less)> groups(&level_less);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string level(trim(table.rows[r][group_col]));
        const auto v = parse_cell(table.rows[r][value_col], location(table, r, value_col));
        if (level.empty() || !v) {
            ++out.dropped;
            continue;
        }
        groups[level].push_back(*v);
    }
    if (groups.size() != 2) {
        throw GroupArity("column '" + *spec.by + "' has " + std::to_string(groups.size()) +
                         " distinct levels; exactly 2 are required");
    }
    for (auto& [level, values] : groups) {
        out.samples.push_back(make_sample(std::move(values), *spec.by + "=" + level, spec));
    }
    return out;
}

}  // namespace

std::optional<double> parse_cell(std::string_view cell, const std::string& where) {
    cell = trim(cell);
    if (is_missing(cell)) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError(where + ": '" + std::string(cell) + "' is not a number");
    }
    if (std::isnan(value)) return std::nullopt;
    if (!std::isfinite(value)) throw ParseError(where + ": value is not finite");
    return value;
}

IngestResult ingest_tables(const std::vector<CsvTable>& tables, const InputSpec& spec) {
    if (tables.empty()) throw ConfigError("--input is required");
    IngestResult out;
    if (spec.by) {
        if (tables.size() != 1) throw ConfigError("--by reads a single --input file");
        out = ingest_long(tables.front(), spec);
    } else if (tables.size() == 2) {
        for (std::size_t k = 0; k < 2; ++k) {
            const auto& table = tables[k];
            std::size_t col = 0;
            if (spec.columns.size() == 2) {
                col = table.column(spec.columns[k]);
            } else if (spec.columns.size() == 1) {
                col = table.column(spec.columns.front());
            } else if (!spec.columns.empty()) {
                throw ConfigError("--columns takes one or two names with --input2");
            }
            auto values = read_column(table, col, out.dropped);
            out.samples.push_back(make_sample(std::move(values), table.header[col], spec));
        }
    } else {
        const auto& table = tables.front();
        std::vector<std::size_t> cols;
        if (spec.columns.empty()) {
            for (std::size_t c = 0; c < table.header.size(); ++c) cols.push_back(c);
        } else {
            for (const auto& name : spec.columns) cols.push_back(table.column(name));
        }
        if (cols.size() < 2) {
            throw ParseError(table.source + ": need at least 2 sample columns, found " +
                             std::to_string(cols.size()));
        }
        for (const auto c : cols) {
            auto values = read_column(table, c, out.dropped);
            out.samples.push_back(make_sample(std::move(values), table.header[c], spec));
        }
    }
    if (spec.switch_order) std::reverse(out.samples.begin(), out.samples.end());
    return out;
}

IngestResult ingest(const InputSpec& spec) {
    std::vector<CsvTable> tables;
    for (const auto& path : spec.paths) tables.push_back(read_csv(path));
    return ingest_tables(tables, spec);
}

}  // namespace sdtest::cli
