#include "tfc/tune.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tfc/error.hpp"
#include "tfc/numstr.hpp"
#include "tfc/parallel.hpp"

namespace tfc {

namespace {

std::vector<std::uint32_t> complement_rows(const FoldPlan& plan, std::size_t skip_fold,
                                           std::size_t n_rows) {
    std::vector<bool> held(n_rows, false);
    for (std::uint32_t r : plan.folds[skip_fold]) held[r] = true;
    std::vector<std::uint32_t> rows;
    rows.reserve(n_rows - plan.folds[skip_fold].size());
    for (std::size_t r = 0; r < n_rows; ++r) {
        if (!held[r]) rows.push_back(static_cast<std::uint32_t>(r));
    }
    return rows;
}

}  // namespace

Grid Grid::full() {
    Grid g;
    g.learning_rate = {0.01, 0.05, 0.1, 0.3};
    g.num_leaves = {32, 128, 512, 1024};
    g.max_depth = {2, 8, 32, 200};
    g.leaf_estimation_iterations = {1, 5, 10};
    g.leaf_l2_reg = {1.0, 5.0, 10.0};
    return g;
}

Grid Grid::desk() {
    Grid g;
    g.learning_rate = {0.1, 0.3};
    g.num_leaves = {32, 128};
    g.max_depth = {8, 32};
    g.leaf_estimation_iterations = {1, 5};
    g.leaf_l2_reg = {1.0, 5.0};
    return g;
}

std::size_t Grid::size() const {
    return learning_rate.size() * num_leaves.size() * max_depth.size() *
           leaf_estimation_iterations.size() * leaf_l2_reg.size();
}

Hyperparams Grid::combination(std::size_t id, const Hyperparams& base) const {
    Hyperparams hp = base;
    hp.leaf_l2_reg = leaf_l2_reg[id % leaf_l2_reg.size()];
    id /= leaf_l2_reg.size();
    hp.leaf_estimation_iterations =
        leaf_estimation_iterations[id % leaf_estimation_iterations.size()];
    id /= leaf_estimation_iterations.size();
    hp.max_depth = max_depth[id % max_depth.size()];
    id /= max_depth.size();
    hp.num_leaves = num_leaves[id % num_leaves.size()];
    id /= num_leaves.size();
    hp.learning_rate = learning_rate[id];
    return hp;
}

void Grid::validate(const Hyperparams& base) const {
    if (size() == 0) {
        throw Error(ErrorCategory::config, "hyperparameter grid is empty");
    }
    for (std::size_t id = 0; id < size(); ++id) {
        combination(id, base).validate();
    }
}

std::vector<double> cv_score(const EncodedDataset& ds, const LabelScheme& scheme,
                             const Hyperparams& hp, const FoldPlan& plan, int workers) {
    if (plan.folds.empty()) {
        throw Error(ErrorCategory::config, "fold plan is empty");
    }
    std::size_t covered = 0;
    for (const auto& fold : plan.folds) covered += fold.size();
    if (covered != ds.n_rows) {
        throw Error(ErrorCategory::data, "fold plan does not cover the dataset");
    }
    if (ds.labels.size() != ds.n_rows) {
        throw Error(ErrorCategory::data, "cv_score needs a labeled dataset");
    }

    std::vector<double> accuracies(plan.folds.size(), 0.0);
    for (std::size_t i = 0; i < plan.folds.size(); ++i) {
        const auto train_rows = complement_rows(plan, i, ds.n_rows);
        const EncodedDataset train_part = subset_rows(ds, train_rows);
        const EncodedDataset eval_part = subset_rows(ds, plan.folds[i]);
        const TrainOutput out = train(train_part, eval_part, scheme, hp, workers);
        const std::vector<int> predicted = predict_class(out.model, eval_part);

        std::size_t hits = 0;
        for (std::size_t r = 0; r < predicted.size(); ++r) {
            hits += predicted[r] == eval_part.labels[r] ? 1 : 0;
        }
        accuracies[i] = static_cast<double>(hits) / static_cast<double>(eval_part.n_rows);
    }
    return accuracies;
}

TuneResult grid_search(const EncodedDataset& ds, const LabelScheme& scheme, const Grid& grid,
                       const Hyperparams& base, int k, std::uint64_t seed, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    grid.validate(base);
    if (ds.labels.size() != ds.n_rows) {
        throw Error(ErrorCategory::data, "grid_search needs a labeled dataset");
    }

    const FoldPlan plan = stratified_kfold(ds.labels, k, seed);

    TuneResult result;
    result.fold_seed = seed;
    result.k = k;
    result.records.resize(grid.size());

    // Combinations are independent; each is evaluated serially inside so the
    // records are identical no matter how many workers run.
    parallel_for(grid.size(), workers, [&](std::size_t id) {
        TuneRecord rec;
        rec.combination_id = id;
        rec.hp = grid.combination(id, base);
        rec.fold_accuracy = cv_score(ds, scheme, rec.hp, plan, 1);

        double sum = 0.0;
        for (double a : rec.fold_accuracy) sum += a;
        rec.mean = sum / static_cast<double>(rec.fold_accuracy.size());
        double sq = 0.0;
        for (double a : rec.fold_accuracy) sq += (a - rec.mean) * (a - rec.mean);
        rec.stddev = rec.fold_accuracy.size() > 1
                         ? std::sqrt(sq / static_cast<double>(rec.fold_accuracy.size() - 1))
                         : 0.0;
        result.records[id] = std::move(rec);
    });

    std::stable_sort(result.records.begin(), result.records.end(),
                     [](const TuneRecord& a, const TuneRecord& b) { return a.mean > b.mean; });

    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::string tune_result_csv(const TuneResult& result) {
    std::string out = "combination_id,lr,num_leaves,max_depth,leaf_iters,leaf_reg";
    const std::size_t folds = result.records.empty() ? 0 : result.records[0].fold_accuracy.size();
    for (std::size_t i = 1; i <= folds; ++i) {
        out += ",fold" + std::to_string(i);
    }
    out += ",mean,std\n";
    for (const TuneRecord& rec : result.records) {
        out += std::to_string(rec.combination_id);
        out += ',' + dtos(rec.hp.learning_rate);
        out += ',' + std::to_string(rec.hp.num_leaves);
        out += ',' + std::to_string(rec.hp.max_depth);
        out += ',' + std::to_string(rec.hp.leaf_estimation_iterations);
        out += ',' + dtos(rec.hp.leaf_l2_reg);
        for (double a : rec.fold_accuracy) out += ',' + dtos(a);
        out += ',' + dtos(rec.mean);
        out += ',' + dtos(rec.stddev);
        out += '\n';
    }
    return out;
}

double round1(double percent) {
    // Truncate to one decimal; the epsilon absorbs binary representation
    // error in values that are exact tenths.
    return std::floor(percent * 10.0 + 1e-9) / 10.0;
}

}  // namespace tfc
