#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sdtest/procedures.hpp"

namespace sdtest::cli {

/// "first", "second", "third", then "4th", "5th", ...
std::string order_name(int s);

/// Human-readable block: hypothesis, test setting, tuning parameters, result.
std::string format_report(const TestResult& result);

/// Flat `key=value` document, one key per line, numbers at full precision.
/// Elapsed time is left out so identical runs give identical bytes.
std::string machine_record(const TestResult& result);

/// Inverse of machine_record for every field the record carries.
TestResult parse_machine_record(std::string_view text);

/// CSV with header grid,F1,F2,D and one row per grid point.
std::string curves_csv(const TestResult& result);
void export_curves(const TestResult& result, const std::filesystem::path& path);

std::string format_scan(const SubsampleScan& scan, double alpha);

}  // namespace sdtest::cli
