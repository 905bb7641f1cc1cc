#include "tfc/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "tfc/error.hpp"
#include "tfc/numstr.hpp"

namespace tfc {

namespace {

constexpr std::size_t kNumColumns = 10;

std::vector<std::string_view> split_line(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// ';'-joined token set; empty pieces are dropped so "" means the empty set.
// Returns false on duplicate tokens (sets must be unique).
bool parse_token_set(std::string_view field, std::vector<std::string>& out) {
    out.clear();
    if (field.empty()) return true;
    for (std::string_view piece : split_line(field, ';')) {
        if (piece.empty()) continue;
        out.emplace_back(piece);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = i + 1; j < out.size(); ++j) {
            if (out[i] == out[j]) return false;
        }
    }
    return true;
}

void append_token_set(std::string& out, const std::vector<std::string>& tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out.push_back(';');
        out += tokens[i];
    }
}

}  // namespace

ParseResult parse_csv_text(std::string_view text, std::string source) {
    ParseResult result;
    result.table.source = std::move(source);

    std::size_t pos = 0;
    std::size_t line_no = 0;
    std::unordered_set<std::string> seen_ids;

    auto next_line = [&](std::string_view& line) -> bool {
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++line_no;
        return true;
    };

    std::string_view header;
    if (!next_line(header) || header != kCsvHeader) {
        throw Error(ErrorCategory::schema,
                    "header does not match the canonical vehicle schema in " +
                        result.table.source);
    }

    std::string_view line;
    while (next_line(line)) {
        if (line.empty()) continue;
        ++result.table.rows_before_filtering;

        const auto fields = split_line(line, ',');
        if (fields.size() != kNumColumns) {
            result.malformed.push_back({line_no, "expected 10 columns, got " +
                                                     std::to_string(fields.size())});
            continue;
        }

        VehicleRecord rec;
        rec.vehicle_id = std::string(fields[0]);
        rec.product_key = std::string(fields[1]);
        rec.entry_weekday_hour = std::string(fields[4]);

        if (fields[2] == "ICE") {
            rec.derivative = Derivative::ICE;
        } else if (fields[2] == "BEV") {
            rec.derivative = Derivative::BEV;
        } else {
            result.malformed.push_back({line_no, "derivative must be ICE or BEV"});
            continue;
        }

        if (fields[3] == "0") {
            rec.series_flag = false;
        } else if (fields[3] == "1") {
            rec.series_flag = true;
        } else {
            result.malformed.push_back({line_no, "series_flag must be 0 or 1"});
            continue;
        }

        if (fields[5] == "0") {
            rec.priority = 0;
        } else if (fields[5] == "1") {
            rec.priority = 1;
        } else {
            result.malformed.push_back({line_no, "priority must be 0 or 1"});
            continue;
        }

        if (!parse_token_set(fields[6], rec.config_variants) ||
            !parse_token_set(fields[7], rec.inspection_codes) ||
            !parse_token_set(fields[8], rec.parking_locations)) {
            result.malformed.push_back({line_no, "duplicate token in a set column"});
            continue;
        }

        try {
            rec.lead_time_days = parse_double(fields[9]);
        } catch (const Error&) {
            result.malformed.push_back({line_no, "lead_time_days is not a number"});
            continue;
        }
        if (!(rec.lead_time_days > 0.0)) {
            result.malformed.push_back({line_no, "lead_time_days must be positive"});
            continue;
        }

        if (!rec.vehicle_id.empty() && !seen_ids.insert(rec.vehicle_id).second) {
            result.malformed.push_back({line_no, "duplicate vehicle_id"});
            continue;
        }

        result.table.records.push_back(std::move(rec));
    }
    return result;
}

ParseResult parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCategory::io, "cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw Error(ErrorCategory::io, "failed reading " + path);
    }
    return parse_csv_text(buf.str(), path);
}

std::string to_csv(const RawTable& table) {
    std::string out;
    out.reserve(table.records.size() * 96 + 128);
    out += kCsvHeader;
    out.push_back('\n');
    for (const VehicleRecord& rec : table.records) {
        out += rec.vehicle_id;
        out.push_back(',');
        out += rec.product_key;
        out.push_back(',');
        out += to_string(rec.derivative);
        out.push_back(',');
        out.push_back(rec.series_flag ? '1' : '0');
        out.push_back(',');
        out += rec.entry_weekday_hour;
        out.push_back(',');
        out.push_back(rec.priority == 0 ? '0' : '1');
        out.push_back(',');
        append_token_set(out, rec.config_variants);
        out.push_back(',');
        append_token_set(out, rec.inspection_codes);
        out.push_back(',');
        append_token_set(out, rec.parking_locations);
        out.push_back(',');
        out += dtos(rec.lead_time_days);
        out.push_back('\n');
    }
    return out;
}

void write_csv(const RawTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCategory::io, "cannot write " + path);
    }
    const std::string text = to_csv(table);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw Error(ErrorCategory::io, "failed writing " + path);
    }
}

FilterResult validate_and_filter(const RawTable& table) {
    FilterResult result;
    result.table.source = table.source;
    result.table.rows_before_filtering =
        table.rows_before_filtering ? table.rows_before_filtering : table.records.size();
    result.report.input_rows = table.records.size();

    for (const VehicleRecord& rec : table.records) {
        if (!rec.series_flag) {
            ++result.report.removed_non_series;
            continue;
        }
        const bool complete = !rec.vehicle_id.empty() && !rec.product_key.empty() &&
                              !rec.entry_weekday_hour.empty();
        if (!complete) {
            ++result.report.removed_incomplete;
            continue;
        }
        result.table.records.push_back(rec);
    }
    result.report.kept = result.table.records.size();
    return result;
}

DerivativePartition partition_by_derivative(const RawTable& table) {
    DerivativePartition part;
    part.all = table;
    part.ice.source = table.source;
    part.bev.source = table.source;
    for (const VehicleRecord& rec : table.records) {
        (rec.derivative == Derivative::ICE ? part.ice : part.bev).records.push_back(rec);
    }
    return part;
}

}  // namespace tfc
