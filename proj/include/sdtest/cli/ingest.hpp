#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdtest/cli/csv.hpp"
#include "sdtest/distfn.hpp"

namespace sdtest::cli {

struct InputSpec {
    /// One file (columns or long format) or two files (one sample each).
    std::vector<std::filesystem::path> paths;
    /// Columns to read. Empty: every column of a single file, or the first
    /// column of each of two files. In long format, the value column.
    std::vector<std::string> columns;
    /// Group column for long-format input; must have exactly 2 levels.
    std::optional<std::string> by;
    /// Reverse the sample order.
    bool switch_order = false;
    /// Cells are prices; convert each sample to log returns.
    bool returns_from_prices = false;
};

struct IngestResult {
    std::vector<Sample> samples;
    /// Blank or NaN cells skipped, summed over samples.
    std::size_t dropped = 0;
};

/// Blank, NA and NaN cells yield nullopt; anything else must be a finite number.
std::optional<double> parse_cell(std::string_view cell, const std::string& where);

IngestResult ingest_tables(const std::vector<CsvTable>& tables, const InputSpec& spec);
IngestResult ingest(const InputSpec& spec);

}  // namespace sdtest::cli
