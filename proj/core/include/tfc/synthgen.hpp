#pragma once

#include <cstdint>
#include <vector>

#include "tfc/vehicle.hpp"

namespace tfc {

// Synthetic fleet generator. Vehicles are drawn from a known additive
// ground-truth process so downstream claims can be tested without the
// production data set. All draws come from the seeded generator in
// tfc/rng.hpp; identical configs produce identical fleets.
struct GeneratorConfig {
    std::size_t n_vehicles = 10000;
    std::uint64_t seed = 42;
    double share_ice = 0.568;

    struct VocabSizes {
        std::size_t config_variant = 100;
        std::size_t inspection_code = 200;
        std::size_t parking_location = 20;
        std::size_t product_key = 6;
    } vocab;

    double mean_codes_per_vehicle = 6.0;
    double priority_rate = 0.1;
    double base_rate_per_day = 2.0;   // rate of the exponential noise term
    double effect_scale = 0.25;       // mean additive effect per inspection code, days
    double target_share_under_1d = 0.557;

    void validate() const;  // throws on violated invariants
};

// The generating process: lead time is
//   max(0.01, multiplier * (base_offset + sum of token effects + Exp(rate)))
// with one additive effect per inspection code, configuration variant,
// weekday-hour bucket and parking location. The multiplier applies to
// priority vehicles only. This additive shape is an assumption standing in
// for the unknown real process; only its right-skewed marginal is known.
struct GroundTruthParams {
    std::vector<double> inspection_effect;
    std::vector<double> config_effect;
    std::vector<double> entry_effect;    // 168 weekday-hour buckets
    std::vector<double> parking_effect;
    double priority_multiplier = 0.7;
    double base_offset_ice = 0.0;
    double base_offset_bev = 0.0;
    double inspection_effect_scale = 0.0;  // draw scale, kept for process changes

    bool operator==(const GroundTruthParams&) const = default;
};

// Draws effects from the config seed, then bisects a shared base offset until
// the share of lead times <= 1 day on a fixed 20,000-vehicle calibration
// sample hits target_share_under_1d. Deterministic; throws a calibration
// error when the target cannot be met.
GroundTruthParams calibrate(const GeneratorConfig& config);

// Fleet under explicit ground truth. stream selects an independent draw
// stream for the same config (0 = default period, 1 = post-change period).
std::vector<VehicleRecord> generate_fleet(const GeneratorConfig& config,
                                          const GroundTruthParams& params,
                                          std::uint64_t stream = 0);

// Calibrates and generates in one step.
std::vector<VehicleRecord> generate_fleet(const GeneratorConfig& config);

// Re-draws 30% of the inspection-code effects with the draw scale multiplied
// by magnitude; everything else is untouched. Returns a new value.
GroundTruthParams apply_process_change(const GroundTruthParams& params, double magnitude,
                                       std::uint64_t seed);

// Token spellings used by the generator; exposed for tests.
std::string config_variant_token(std::size_t i);
std::string inspection_code_token(std::size_t i);
std::string parking_location_token(std::size_t i);
std::string product_key_token(std::size_t i);
std::string entry_bucket_token(std::size_t i);  // i in [0, 168)

inline constexpr std::size_t kEntryBuckets = 168;

}  // namespace tfc
