#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sdtest::cli {

/// A CSV document: a mandatory header row plus data rows of the same width.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by header name; throws ParseError when absent.
    std::size_t column(std::string_view name) const;
};

/// RFC 4180 style: comma separated, double-quoted fields with "" escapes,
/// LF or CRLF line ends, optional UTF-8 byte order mark.
CsvTable parse_csv(std::string_view text, std::string source = "<memory>");
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace sdtest::cli
