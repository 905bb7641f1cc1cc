#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfc/gbdt.hpp"
#include "tfc/split.hpp"

namespace tfc {

// Value lists per hyperparameter; the grid is their cross product in the
// fixed nesting order learning_rate, num_leaves, max_depth,
// leaf_estimation_iterations, leaf_l2_reg. Remaining hyperparameters come
// from a base Hyperparams.
struct Grid {
    std::vector<double> learning_rate;
    std::vector<int> num_leaves;
    std::vector<int> max_depth;
    std::vector<int> leaf_estimation_iterations;
    std::vector<double> leaf_l2_reg;

    // 4 x 4 x 4 x 3 x 3 = 576 combinations over the full tuning ranges.
    static Grid full();
    // 2 values per axis (32 combinations) for desk-scale runs.
    static Grid desk();

    std::size_t size() const;
    Hyperparams combination(std::size_t id, const Hyperparams& base) const;
    void validate(const Hyperparams& base) const;  // throws on empty or out-of-range
};

struct TuneRecord {
    std::size_t combination_id = 0;  // index in grid order
    Hyperparams hp;
    std::vector<double> fold_accuracy;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
};

// Records sorted by mean descending (ties keep grid order), so records[0]
// is the selected combination.
struct TuneResult {
    std::vector<TuneRecord> records;
    std::uint64_t fold_seed = 0;
    int k = 0;
    double wall_time_seconds = 0.0;

    const TuneRecord& best() const { return records.front(); }
};

// Accuracy per fold: for each fold, train on the remaining folds (the held
// out fold doubles as the early-stopping validation set) and score accuracy
// on the held-out fold.
std::vector<double> cv_score(const EncodedDataset& ds, const LabelScheme& scheme,
                             const Hyperparams& hp, const FoldPlan& plan, int workers = -1);

// Every combination is evaluated once against the same fold plan.
TuneResult grid_search(const EncodedDataset& ds, const LabelScheme& scheme, const Grid& grid,
                       const Hyperparams& base, int k = 5, std::uint64_t seed = 42,
                       int workers = -1);

// CSV export: combination_id, hyperparameters, per-fold accuracies, mean, std.
std::string tune_result_csv(const TuneResult& result);

// Reporting precision used for accuracy tables: one decimal, truncated
// toward zero (the convention of the reference cross-validation table).
double round1(double percent);

}  // namespace tfc
