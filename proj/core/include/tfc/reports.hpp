#pragma once

#include <string>

#include "tfc/evalcmp.hpp"
#include "tfc/gbdt.hpp"
#include "tfc/ingest.hpp"
#include "tfc/tune.hpp"

namespace tfc {

// Report documents carry a "type" field so the CLI can render any of them.
// JSON is written with sorted keys and round-trip decimal strings, so
// identical inputs yield identical bytes.
std::string to_report_json(const Metrics& metrics);
std::string to_report_json(const ComparisonReport& report);
std::string to_report_json(const DriftReport& report);
std::string to_report_json(const TrainReport& report);
std::string to_report_json(const TuneResult& result);
std::string to_report_json(const FilterReport& report);

std::string confusion_csv(const Metrics& metrics);

}  // namespace tfc
