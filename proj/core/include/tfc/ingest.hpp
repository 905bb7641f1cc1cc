#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tfc/vehicle.hpp"

namespace tfc {

// Canonical vehicle CSV: UTF-8, comma separated, first line is the header
// below. Multi-valued columns are ';'-joined tokens (empty string = empty
// set); fields never contain ',' or '"'. derivative is ICE or BEV,
// series_flag is 0/1, lead_time_days uses '.' as decimal separator.
inline constexpr std::string_view kCsvHeader =
    "vehicle_id,product_key,derivative,series_flag,entry_weekday_hour,"
    "priority,config_variants,inspection_codes,parking_locations,lead_time_days";

struct MalformedRow {
    std::size_t line = 0;  // 1-based, header is line 1
    std::string reason;
};

struct ParseResult {
    RawTable table;
    std::vector<MalformedRow> malformed;
};

// Rows either become valid records or are reported in `malformed`; record
// order is preserved. Throws on unreadable files (io) and on a missing or
// renamed header column (schema).
ParseResult parse_csv(const std::string& path);
ParseResult parse_csv_text(std::string_view text, std::string source);

std::string to_csv(const RawTable& table);
void write_csv(const RawTable& table, const std::string& path);

struct FilterReport {
    std::size_t input_rows = 0;
    std::size_t kept = 0;
    std::size_t removed_non_series = 0;
    std::size_t removed_incomplete = 0;
};

struct FilterResult {
    RawTable table;
    FilterReport report;
};

// Keeps exactly the series vehicles whose scalar characteristics are all
// present. Token sets may be empty. Total: never throws.
FilterResult validate_and_filter(const RawTable& table);

struct DerivativePartition {
    RawTable all;
    RawTable ice;
    RawTable bev;
};

// all preserves input order; ice and bev are a disjoint cover of all.
DerivativePartition partition_by_derivative(const RawTable& table);

}  // namespace tfc
