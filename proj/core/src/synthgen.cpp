#include "tfc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tfc/error.hpp"
#include "tfc/rng.hpp"

namespace tfc {

namespace {

// Substream tags: one independent xoshiro stream per stage.
constexpr std::uint64_t kStreamEffects = 1;
constexpr std::uint64_t kStreamCalibration = 2;
constexpr std::uint64_t kStreamFleetBase = 16;

constexpr double kMinLeadDays = 0.01;

const char* kWeekdays[7] = {"Monday",   "Tuesday", "Wednesday", "Thursday",
                            "Friday",   "Saturday", "Sunday"};

struct Characteristics {
    Derivative derivative = Derivative::ICE;
    std::size_t product_key = 0;
    std::size_t entry_bucket = 0;
    int priority = 0;
    std::vector<std::uint32_t> config_variants;
    std::vector<std::uint32_t> inspection_codes;
    std::vector<std::uint32_t> parking_locations;
};

// n distinct indices in [0, v), ascending. n small relative to v in practice.
std::vector<std::uint32_t> sample_distinct(Rng& rng, std::size_t v, std::size_t n) {
    std::vector<std::uint32_t> out;
    if (n >= v) {
        out.resize(v);
        for (std::size_t i = 0; i < v; ++i) out[i] = static_cast<std::uint32_t>(i);
        return out;
    }
    out.reserve(n);
    while (out.size() < n) {
        const auto candidate = static_cast<std::uint32_t>(rng.below(v));
        if (std::find(out.begin(), out.end(), candidate) == out.end()) {
            out.push_back(candidate);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Characteristics draw_characteristics(Rng& rng, const GeneratorConfig& config) {
    Characteristics c;

    // Product keys alternate ICE/BEV by index; the derivative is drawn first
    // and the key uniformly from that derivative's pool. With a single key
    // there is no BEV pool, so everything is ICE.
    const std::size_t n_keys = config.vocab.product_key;
    const std::size_t n_ice_keys = (n_keys + 1) / 2;
    const std::size_t n_bev_keys = n_keys / 2;
    const bool ice = n_bev_keys == 0 || (n_ice_keys > 0 && rng.bernoulli(config.share_ice));
    c.derivative = ice ? Derivative::ICE : Derivative::BEV;
    if (ice) {
        c.product_key = 2 * rng.below(n_ice_keys);
    } else {
        c.product_key = 2 * rng.below(n_bev_keys) + 1;
    }

    c.entry_bucket = rng.below(kEntryBuckets);
    c.priority = rng.bernoulli(config.priority_rate) ? 1 : 0;
    c.config_variants =
        sample_distinct(rng, config.vocab.config_variant, 1 + rng.poisson(2.0));
    c.inspection_codes = sample_distinct(rng, config.vocab.inspection_code,
                                         rng.poisson(config.mean_codes_per_vehicle));
    c.parking_locations =
        sample_distinct(rng, config.vocab.parking_location, 1 + rng.poisson(1.0));
    return c;
}

double effect_sum(const Characteristics& c, const GroundTruthParams& params) {
    double s = params.entry_effect[c.entry_bucket];
    for (auto i : c.config_variants) s += params.config_effect[i];
    for (auto i : c.inspection_codes) s += params.inspection_effect[i];
    for (auto i : c.parking_locations) s += params.parking_effect[i];
    return s;
}

double lead_time(const Characteristics& c, double noise, const GroundTruthParams& params,
                 double shared_shift = 0.0) {
    const double base = shared_shift + (c.derivative == Derivative::ICE
                                            ? params.base_offset_ice
                                            : params.base_offset_bev);
    const double multiplier = c.priority == 1 ? params.priority_multiplier : 1.0;
    return std::max(kMinLeadDays, multiplier * (base + effect_sum(c, params) + noise));
}

// Effects before base calibration; base offsets hold only the small
// per-derivative deviations at this point.
GroundTruthParams draw_effects(const GeneratorConfig& config) {
    Rng rng(derive_seed(config.seed, kStreamEffects));
    GroundTruthParams params;
    params.inspection_effect_scale = config.effect_scale;
    params.priority_multiplier = 0.7;

    params.inspection_effect.reserve(config.vocab.inspection_code);
    for (std::size_t i = 0; i < config.vocab.inspection_code; ++i) {
        params.inspection_effect.push_back(rng.exponential(1.0 / config.effect_scale));
    }
    params.config_effect.reserve(config.vocab.config_variant);
    for (std::size_t i = 0; i < config.vocab.config_variant; ++i) {
        params.config_effect.push_back(rng.exponential(1.0 / (0.4 * config.effect_scale)));
    }
    params.entry_effect.reserve(kEntryBuckets);
    for (std::size_t i = 0; i < kEntryBuckets; ++i) {
        const bool weekend = i >= 5 * 24;  // Saturday and Sunday buckets
        params.entry_effect.push_back(rng.uniform(0.0, 0.5 * config.effect_scale) +
                                      (weekend ? 0.3 * config.effect_scale : 0.0));
    }
    params.parking_effect.reserve(config.vocab.parking_location);
    for (std::size_t i = 0; i < config.vocab.parking_location; ++i) {
        params.parking_effect.push_back(rng.uniform(0.0, 0.4 * config.effect_scale));
    }

    params.base_offset_ice = rng.uniform(-0.5, 0.5) * config.effect_scale;
    params.base_offset_bev = rng.uniform(-0.5, 0.5) * config.effect_scale;
    return params;
}

std::string weekday_hour(std::size_t bucket) {
    std::string s = kWeekdays[bucket / 24];
    s.push_back('-');
    s += std::to_string(bucket % 24);
    return s;
}

}  // namespace

void GeneratorConfig::validate() const {
    auto fraction = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorCategory::config,
                        std::string(name) + " must be a fraction in [0, 1]");
        }
    };
    fraction(share_ice, "share_ice");
    fraction(priority_rate, "priority_rate");
    fraction(target_share_under_1d, "target_share_under_1d");
    if (vocab.config_variant < 1 || vocab.inspection_code < 1 ||
        vocab.parking_location < 1 || vocab.product_key < 1) {
        throw Error(ErrorCategory::config, "vocabulary sizes must be >= 1");
    }
    if (!(mean_codes_per_vehicle >= 0.0)) {
        throw Error(ErrorCategory::config, "mean_codes_per_vehicle must be >= 0");
    }
    if (!(base_rate_per_day > 0.0)) {
        throw Error(ErrorCategory::config, "base_rate_per_day must be > 0");
    }
    if (!(effect_scale > 0.0)) {
        throw Error(ErrorCategory::config, "effect_scale must be > 0");
    }
}

GroundTruthParams calibrate(const GeneratorConfig& config) {
    config.validate();
    if (!(config.target_share_under_1d > 0.0 && config.target_share_under_1d < 1.0)) {
        throw Error(ErrorCategory::config, "target_share_under_1d must be in (0, 1)");
    }

    GroundTruthParams params = draw_effects(config);

    // Fixed calibration sample, independent of n_vehicles.
    constexpr std::size_t kSamples = 20000;
    Rng rng(derive_seed(config.seed, kStreamCalibration));
    std::vector<Characteristics> sample;
    sample.reserve(kSamples);
    std::vector<double> noise(kSamples);
    for (std::size_t i = 0; i < kSamples; ++i) {
        sample.push_back(draw_characteristics(rng, config));
        noise[i] = rng.exponential(config.base_rate_per_day);
    }

    auto share_under_1d = [&](double shift) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < kSamples; ++i) {
            if (lead_time(sample[i], noise[i], params, shift) <= 1.0) ++count;
        }
        return static_cast<double>(count) / static_cast<double>(kSamples);
    };

    // share is non-increasing in the shift; bisect to 1e-4 days.
    double lo = -200.0, hi = 200.0;
    const double target = config.target_share_under_1d;
    if (share_under_1d(lo) < target || share_under_1d(hi) >= target) {
        throw Error(ErrorCategory::data, "calibration target unattainable");
    }
    int steps = 0;
    while (hi - lo > 1e-4) {
        if (++steps > 100) {
            throw Error(ErrorCategory::data,
                        "calibration did not converge within 100 bisection steps");
        }
        const double mid = 0.5 * (lo + hi);
        if (share_under_1d(mid) >= target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (std::abs(share_under_1d(lo) - target) > 0.02) {
        throw Error(ErrorCategory::data, "calibration target unattainable");
    }

    params.base_offset_ice += lo;
    params.base_offset_bev += lo;
    return params;
}

std::vector<VehicleRecord> generate_fleet(const GeneratorConfig& config,
                                          const GroundTruthParams& params,
                                          std::uint64_t stream) {
    config.validate();
    Rng rng(derive_seed(config.seed, kStreamFleetBase + stream));

    std::vector<VehicleRecord> fleet;
    fleet.reserve(config.n_vehicles);
    char id[16];
    for (std::size_t i = 0; i < config.n_vehicles; ++i) {
        const Characteristics c = draw_characteristics(rng, config);
        const double noise = rng.exponential(config.base_rate_per_day);

        VehicleRecord rec;
        std::snprintf(id, sizeof(id), "V%07zu", i);
        rec.vehicle_id = id;
        rec.product_key = product_key_token(c.product_key);
        rec.derivative = c.derivative;
        rec.series_flag = true;
        rec.entry_weekday_hour = entry_bucket_token(c.entry_bucket);
        rec.priority = c.priority;
        for (auto v : c.config_variants) rec.config_variants.push_back(config_variant_token(v));
        for (auto v : c.inspection_codes) rec.inspection_codes.push_back(inspection_code_token(v));
        for (auto v : c.parking_locations) {
            rec.parking_locations.push_back(parking_location_token(v));
        }
        rec.lead_time_days = lead_time(c, noise, params);
        fleet.push_back(std::move(rec));
    }
    return fleet;
}

std::vector<VehicleRecord> generate_fleet(const GeneratorConfig& config) {
    return generate_fleet(config, calibrate(config), 0);
}

GroundTruthParams apply_process_change(const GroundTruthParams& params, double magnitude,
                                       std::uint64_t seed) {
    if (!(magnitude > 0.0)) {
        throw Error(ErrorCategory::config, "process change magnitude must be > 0");
    }
    GroundTruthParams out = params;
    const std::size_t n = out.inspection_effect.size();
    const auto n_redraw = static_cast<std::size_t>(std::llround(0.3 * static_cast<double>(n)));
    if (n_redraw == 0) return out;

    Rng rng(derive_seed(seed, 3));
    std::vector<std::uint32_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < n_redraw; ++i) {
        std::swap(indices[i], indices[i + rng.below(n - i)]);
    }
    const double rate = 1.0 / (out.inspection_effect_scale * magnitude);
    for (std::size_t i = 0; i < n_redraw; ++i) {
        out.inspection_effect[indices[i]] = rng.exponential(rate);
    }
    return out;
}

std::string config_variant_token(std::size_t i) {
    // Paper-style spelling "AA1"; unique for i < 9 * 26 * 26.
    if (i < 9u * 26 * 26) {
        std::string s(3, '0');
        s[0] = static_cast<char>('A' + (i / 9) / 26 % 26);
        s[1] = static_cast<char>('A' + (i / 9) % 26);
        s[2] = static_cast<char>('1' + i % 9);
        return s;
    }
    return "CV" + std::to_string(i);
}

std::string inspection_code_token(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04zu-%04zuF", 1000 + i % 9000, 9000 + (i / 9000) % 1000);
    return buf;
}

std::string parking_location_token(std::size_t i) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "Parking%02zu-Level%02zu", 1 + i / 4, 1 + i % 4);
    return buf;
}

std::string product_key_token(std::size_t i) {
    std::string s(1, static_cast<char>('A' + i % 26));
    s += std::to_string(10 + i);
    s += "BC";
    return s;
}

std::string entry_bucket_token(std::size_t i) {
    return weekday_hour(i % kEntryBuckets);
}

}  // namespace tfc
