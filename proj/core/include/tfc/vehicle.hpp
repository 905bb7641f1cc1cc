#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tfc {

enum class Derivative { ICE, BEV };

inline std::string_view to_string(Derivative d) {
    return d == Derivative::ICE ? "ICE" : "BEV";
}

// One vehicle as it leaves the area: characteristics plus the realized lead
// time in days. Multi-valued characteristics are sets; empty sets are legal
// (a vehicle may have no recorded inspection codes).
struct VehicleRecord {
    std::string vehicle_id;
    std::string product_key;
    Derivative derivative = Derivative::ICE;
    bool series_flag = true;
    std::string entry_weekday_hour;  // e.g. "Friday-19"
    int priority = 0;                // 0 or 1
    std::vector<std::string> config_variants;
    std::vector<std::string> inspection_codes;
    std::vector<std::string> parking_locations;
    double lead_time_days = 0.0;

    bool operator==(const VehicleRecord&) const = default;
};

struct RawTable {
    std::vector<VehicleRecord> records;
    std::string source;                  // path or synthetic tag
    std::size_t rows_before_filtering = 0;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
};

}  // namespace tfc
