#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tfc/gbdt.hpp"
#include "tfc/labeling.hpp"
#include "tfc/synthgen.hpp"
#include "tfc/vehicle.hpp"

namespace tfc {

// Confusion-matrix metrics. confusion[actual][predicted]; accuracy is the
// trace over the total. Macro F1 is the unweighted mean of per-class F1,
// with unsupported classes contributing zero.
struct Metrics {
    double accuracy = 0.0;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    double macro_f1 = 0.0;
    std::vector<std::vector<std::int64_t>> confusion;
};

Metrics evaluate(std::span<const int> predictions, std::span<const int> labels, int n_classes);

// Stand-in for the rule-based planning system: one planned class per product
// key, frozen at fit time (the label of the median historical lead time),
// never updated afterwards. Unseen keys fall back to the global median class.
struct RuleBaseline {
    std::unordered_map<std::string, int> planned_class;
    int fallback_class = 0;
    int n_classes = 0;
};

RuleBaseline fit_baseline(const RawTable& history, const LabelScheme& scheme);
std::vector<int> baseline_predict(const RuleBaseline& baseline, const RawTable& rows);

struct ComparisonReport {
    Metrics model;
    Metrics baseline;
    double delta_points = 0.0;       // model accuracy - baseline accuracy, in points
    double delta_relative_pct = 0.0; // the same delta relative to the baseline, percent
    double prepare_seconds = 0.0;    // encoding the test rows
    double classify_seconds = 0.0;
    int n_classes = 0;
    std::size_t n_rows = 0;
};

// Both systems on the same held-out rows. test_table supplies the baseline's
// product keys and the true lead times; test_encoded must be the same rows
// encoded with the model's vocabulary.
ComparisonReport compare_systems(const BoostedModel& model, const RuleBaseline& baseline,
                                 const EncodedDataset& test_encoded, const RawTable& test_table,
                                 const LabelScheme& scheme);

struct DriftReport {
    double accuracy_pre = 0.0;        // A0: model and data from the same period
    double accuracy_stale = 0.0;      // A1: pre-change model on post-change data
    double accuracy_retrained = 0.0;  // A2: retrained on post-change data
    double magnitude = 0.0;
    int n_classes = 0;
    std::size_t n_vehicles = 0;
    std::uint64_t seed = 0;
};

// Three-step retraining experiment: train and test on a generated fleet
// (A0); shift the generating process by `magnitude` and score the stale
// model on a post-change fleet (A1); retrain on the post-change training
// split and score again (A2). magnitude 0 is the control: the process is
// left unchanged and only the draw stream differs.
DriftReport drift_experiment(const GeneratorConfig& config, double magnitude,
                             const LabelScheme& scheme, const Hyperparams& hp = {},
                             int workers = -1);

}  // namespace tfc
