#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfc/features.hpp"
#include "tfc/labeling.hpp"

namespace tfc {

// Training hyperparameters. Ranges follow the tuning surface: learning rate
// 0.01..0.3, leaves 32..1024, depth up to 200, leaf estimation iterations
// 1..10, leaf L2 regularization 1..10. max_depth additionally admits 1 so a
// single-split tree can be requested directly.
struct Hyperparams {
    double learning_rate = 0.1;
    int num_leaves = 32;
    int max_depth = 32;
    int leaf_estimation_iterations = 1;
    double leaf_l2_reg = 1.0;
    int n_rounds_max = 1000;
    int early_stopping_rounds = 50;
    int min_data_in_leaf = 20;
    double min_gain = 0.0;

    void validate() const;  // throws on out-of-range values

    bool operator==(const Hyperparams&) const = default;
};

// Binary split tree. feature == -1 marks a leaf. Features are binary, so the
// implied threshold is 0.5: rows without the feature go left, rows with it go
// right. Leaf values are stored unscaled; the learning rate is applied when
// scores are accumulated.
struct TreeNode {
    std::int32_t feature = -1;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;
    double gain = 0.0;  // split gain, internal nodes only
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int n_leaves = 0;
    int depth = 0;

    double predict_features(std::span<const std::uint32_t> sorted_features) const;
    double predict_row(const EncodedDataset& ds, std::size_t row) const {
        return predict_features(ds.row(row));
    }
};

// One tree per class per boosting round, round-major. Prediction is
// softmax(base_scores + learning_rate * sum of tree outputs).
struct BoostedModel {
    int n_classes = 0;
    std::size_t n_features = 0;
    std::vector<Tree> trees;
    std::vector<double> base_scores;
    Hyperparams hp;
    std::uint64_t vocab_fingerprint = 0;
    LabelScheme scheme;

    int rounds() const {
        return n_classes == 0 ? 0 : static_cast<int>(trees.size()) / n_classes;
    }
    const Tree& tree_at(int round, int cls) const {
        return trees[static_cast<std::size_t>(round) * n_classes + cls];
    }
};

struct TrainReport {
    int rounds_completed = 0;  // rounds kept after early stopping
    int total_trees = 0;       // rounds_completed * n_classes
    bool stopped_early = false;
    int best_round = 0;        // 0-based round with the best validation loss
    std::vector<double> train_loss;      // per kept round
    std::vector<double> train_accuracy;
    std::vector<double> valid_loss;
    std::vector<double> valid_accuracy;
    double wall_time_seconds = 0.0;
    std::vector<double> relevance_gain;          // per feature, summed split gains
    std::vector<std::int64_t> relevance_splits;  // per feature, split counts
};

// Softmax cross-entropy gradients and hessians for one row:
// g_i = p_i - [i == true_class], h_i = p_i (1 - p_i), p = softmax(scores).
// Computed with max subtraction; gradients sum to zero.
void softmax_grad_hess(std::span<const double> scores, int true_class,
                       std::span<double> gradients, std::span<double> hessians);

void softmax(std::span<const double> scores, std::span<double> probabilities);

// Gradient/hessian sums over a leaf's rows with the active class score
// shifted; drives the Newton refinements when leaf_estimation_iterations > 1.
class LeafGradSource {
public:
    virtual ~LeafGradSource() = default;
    virtual std::pair<double, double> shifted_grad_hess(std::span<const std::uint32_t> rows,
                                                        double shift) const = 0;
};

// Greedy leaf-wise growth: always split the open leaf with the largest gain
//   gain = S(left) + S(right) - S(parent),  S(g, h) = g^2 / (h + lambda)
// subject to num_leaves, max_depth, min_data_in_leaf and gain > min_gain.
// Ties break to the lowest feature index, then the lowest leaf id. With no
// valid split at the root the result is a single-leaf tree.
Tree grow_tree(const EncodedDataset& ds, std::span<const double> gradients,
               std::span<const double> hessians, const Hyperparams& hp,
               const LeafGradSource* refiner = nullptr);

struct TrainOutput {
    BoostedModel model;
    TrainReport report;
};

// Boosts until n_rounds_max or until validation log-loss has not improved
// for early_stopping_rounds rounds, then returns the model truncated to the
// best validation round. workers = -1 uses TFC_THREADS / all cores; results
// do not depend on the worker count.
TrainOutput train(const EncodedDataset& train_ds, const EncodedDataset& valid_ds,
                  const LabelScheme& scheme, const Hyperparams& hp, int workers = -1);

// Per-row class probabilities (row-major, n_classes per row, summing to 1)
// and argmax classes with lowest-index tie break. Both verify the dataset's
// vocabulary fingerprint against the model.
std::vector<double> predict_scores(const BoostedModel& model, const EncodedDataset& ds);
std::vector<int> predict_class(const BoostedModel& model, const EncodedDataset& ds);

struct RelevanceTable {
    std::vector<double> gain;
    std::vector<std::int64_t> split_count;
};

// Summed split gains and split counts per feature; unused features get zero.
RelevanceTable feature_relevance(const BoostedModel& model);

// Versioned JSON container; numbers are stored as shortest round-trip
// decimal strings, so a loaded model predicts bit-identically.
void save_model(const BoostedModel& model, const std::string& path);
BoostedModel load_model(const std::string& path);

}  // namespace tfc
