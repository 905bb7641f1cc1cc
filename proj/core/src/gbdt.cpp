#include "tfc/gbdt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "tfc/error.hpp"
#include "tfc/parallel.hpp"

namespace tfc {

namespace {

constexpr double kBaseScoreFloor = 1e-15;
constexpr std::size_t kRowChunk = 2048;

double leaf_objective(double g, double h, double lambda) { return g * g / (h + lambda); }

struct SplitCandidate {
    std::int32_t feature = -1;
    double gain = 0.0;
    double g_one = 0.0;
    double h_one = 0.0;
    std::size_t n_one = 0;
};

struct LeafState {
    std::vector<std::uint32_t> rows;
    double sum_g = 0.0;
    double sum_h = 0.0;
    int depth = 0;
    std::int32_t node = -1;
    SplitCandidate best;
    bool open = true;
};

// Per-call accumulation buffers for the two-bin feature histograms (the zero
// bin is derived from the parent totals).
struct HistScratch {
    std::vector<double> g_one;
    std::vector<double> h_one;
    std::vector<std::uint32_t> n_one;
    std::vector<std::uint32_t> touched;

    explicit HistScratch(std::size_t n_features)
        : g_one(n_features, 0.0), h_one(n_features, 0.0), n_one(n_features, 0) {}
};

void find_best_split(const EncodedDataset& ds, std::span<const double> gradients,
                     std::span<const double> hessians, const Hyperparams& hp,
                     LeafState& leaf, HistScratch& scratch) {
    leaf.best = SplitCandidate{};
    if (leaf.depth >= hp.max_depth) return;
    const auto min_rows = static_cast<std::size_t>(hp.min_data_in_leaf);
    if (leaf.rows.size() < 2 * min_rows) return;

    scratch.touched.clear();
    for (std::uint32_t r : leaf.rows) {
        for (std::uint32_t f : ds.row(r)) {
            if (scratch.n_one[f]++ == 0) scratch.touched.push_back(f);
            scratch.g_one[f] += gradients[r];
            scratch.h_one[f] += hessians[r];
        }
    }
    // Ascending feature order makes the strict comparison below resolve gain
    // ties toward the lowest feature index.
    std::sort(scratch.touched.begin(), scratch.touched.end());

    const double parent = leaf_objective(leaf.sum_g, leaf.sum_h, hp.leaf_l2_reg);
    double best_gain = hp.min_gain;
    for (std::uint32_t f : scratch.touched) {
        const std::size_t n_one = scratch.n_one[f];
        const std::size_t n_zero = leaf.rows.size() - n_one;
        if (n_one >= min_rows && n_zero >= min_rows) {
            const double g_one = scratch.g_one[f];
            const double h_one = scratch.h_one[f];
            const double gain = leaf_objective(g_one, h_one, hp.leaf_l2_reg) +
                                leaf_objective(leaf.sum_g - g_one, leaf.sum_h - h_one,
                                               hp.leaf_l2_reg) -
                                parent;
            if (gain > best_gain) {
                best_gain = gain;
                leaf.best = {static_cast<std::int32_t>(f), gain, g_one, h_one, n_one};
            }
        }
        scratch.g_one[f] = 0.0;
        scratch.h_one[f] = 0.0;
        scratch.n_one[f] = 0;
    }
}

double newton_value(double sum_g, double sum_h, const Hyperparams& hp,
                    std::span<const std::uint32_t> rows, const LeafGradSource* refiner) {
    double v = -sum_g / (sum_h + hp.leaf_l2_reg);
    for (int it = 1; it < hp.leaf_estimation_iterations; ++it) {
        const auto [g, h] = refiner->shifted_grad_hess(rows, v);
        v -= g / (h + hp.leaf_l2_reg);
    }
    return v;
}

double row_log_loss(std::span<const double> scores, int true_class) {
    const double mx = *std::max_element(scores.begin(), scores.end());
    double denom = 0.0;
    for (double s : scores) denom += std::exp(s - mx);
    return std::log(denom) + mx - scores[true_class];
}

int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

// Gradient source bound to the current score matrix; used for the Newton
// refinements of leaf values.
class ScoreShiftSource final : public LeafGradSource {
public:
    ScoreShiftSource(const std::vector<double>& scores, std::span<const int> labels,
                     int n_classes, int cls)
        : scores_(scores), labels_(labels), n_classes_(n_classes), cls_(cls) {}

    std::pair<double, double> shifted_grad_hess(std::span<const std::uint32_t> rows,
                                                double shift) const override {
        double sum_g = 0.0, sum_h = 0.0;
        for (std::uint32_t r : rows) {
            const double* s = scores_.data() + static_cast<std::size_t>(r) * n_classes_;
            double mx = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < n_classes_; ++j) {
                mx = std::max(mx, s[j] + (j == cls_ ? shift : 0.0));
            }
            double denom = 0.0;
            for (int j = 0; j < n_classes_; ++j) {
                denom += std::exp(s[j] + (j == cls_ ? shift : 0.0) - mx);
            }
            const double p = std::exp(s[cls_] + shift - mx) / denom;
            sum_g += p - (labels_[r] == cls_ ? 1.0 : 0.0);
            sum_h += p * (1.0 - p);
        }
        return {sum_g, sum_h};
    }

private:
    const std::vector<double>& scores_;
    std::span<const int> labels_;
    int n_classes_;
    int cls_;
};

// Chunked by fixed size so results never depend on the worker count.
void parallel_rows(std::size_t n_rows, int workers,
                   const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t n_chunks = (n_rows + kRowChunk - 1) / kRowChunk;
    parallel_for(n_chunks, workers, [&](std::size_t chunk) {
        const std::size_t begin = chunk * kRowChunk;
        const std::size_t end = std::min(begin + kRowChunk, n_rows);
        body(begin, end);
    });
}

}  // namespace

void Hyperparams::validate() const {
    auto check = [](bool ok, const char* msg) {
        if (!ok) throw Error(ErrorCategory::config, msg);
    };
    check(learning_rate >= 0.01 && learning_rate <= 0.3,
          "learning_rate must be in [0.01, 0.3]");
    check(num_leaves >= 32 && num_leaves <= 1024, "num_leaves must be in [32, 1024]");
    check(max_depth >= 1 && max_depth <= 200, "max_depth must be in [1, 200]");
    check(leaf_estimation_iterations >= 1 && leaf_estimation_iterations <= 10,
          "leaf_estimation_iterations must be in [1, 10]");
    check(leaf_l2_reg >= 1.0 && leaf_l2_reg <= 10.0, "leaf_l2_reg must be in [1, 10]");
    check(n_rounds_max >= 1, "n_rounds_max must be >= 1");
    check(early_stopping_rounds >= 0, "early_stopping_rounds must be >= 0");
    check(min_data_in_leaf >= 1, "min_data_in_leaf must be >= 1");
    check(min_gain >= 0.0, "min_gain must be >= 0");
}

double Tree::predict_features(std::span<const std::uint32_t> sorted_features) const {
    std::size_t node = 0;
    while (nodes[node].feature >= 0) {
        const bool has = std::binary_search(sorted_features.begin(), sorted_features.end(),
                                            static_cast<std::uint32_t>(nodes[node].feature));
        node = static_cast<std::size_t>(has ? nodes[node].right : nodes[node].left);
    }
    return nodes[node].value;
}

void softmax(std::span<const double> scores, std::span<double> probabilities) {
    const double mx = *std::max_element(scores.begin(), scores.end());
    double denom = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        probabilities[i] = std::exp(scores[i] - mx);
        denom += probabilities[i];
    }
    for (std::size_t i = 0; i < scores.size(); ++i) probabilities[i] /= denom;
}

void softmax_grad_hess(std::span<const double> scores, int true_class,
                       std::span<double> gradients, std::span<double> hessians) {
    softmax(scores, gradients);  // reuse as probability buffer
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double p = gradients[i];
        hessians[i] = p * (1.0 - p);
        gradients[i] = p - (static_cast<int>(i) == true_class ? 1.0 : 0.0);
    }
}

Tree grow_tree(const EncodedDataset& ds, std::span<const double> gradients,
               std::span<const double> hessians, const Hyperparams& hp,
               const LeafGradSource* refiner) {
    hp.validate();
    if (hp.leaf_estimation_iterations > 1 && refiner == nullptr) {
        throw Error(ErrorCategory::internal,
                    "leaf_estimation_iterations > 1 requires a gradient source");
    }
    if (gradients.size() != ds.n_rows || hessians.size() != ds.n_rows) {
        throw Error(ErrorCategory::internal, "gradient size does not match dataset");
    }

    Tree tree;
    tree.nodes.emplace_back();
    HistScratch scratch(ds.n_features);

    std::vector<LeafState> leaves;
    {
        LeafState root;
        root.rows.resize(ds.n_rows);
        std::iota(root.rows.begin(), root.rows.end(), 0u);
        root.sum_g = 0.0;
        root.sum_h = 0.0;
        for (std::size_t i = 0; i < ds.n_rows; ++i) {
            root.sum_g += gradients[i];
            root.sum_h += hessians[i];
        }
        root.node = 0;
        find_best_split(ds, gradients, hessians, hp, root, scratch);
        leaves.push_back(std::move(root));
    }

    int n_leaves = 1;
    while (n_leaves < hp.num_leaves) {
        // Lowest leaf id wins gain ties: scan in creation order, strict >.
        int pick = -1;
        double pick_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (leaves[i].open && leaves[i].best.feature >= 0 &&
                leaves[i].best.gain > pick_gain) {
                pick = static_cast<int>(i);
                pick_gain = leaves[i].best.gain;
            }
        }
        if (pick < 0) break;

        const SplitCandidate best = leaves[pick].best;
        const std::int32_t parent_node = leaves[pick].node;
        const int child_depth = leaves[pick].depth + 1;
        std::vector<std::uint32_t> parent_rows = std::move(leaves[pick].rows);
        const double parent_g = leaves[pick].sum_g;
        const double parent_h = leaves[pick].sum_h;
        leaves[pick].open = false;

        LeafState left, right;
        left.rows.reserve(parent_rows.size() - best.n_one);
        right.rows.reserve(best.n_one);
        for (std::uint32_t r : parent_rows) {
            if (ds.row_has_feature(r, static_cast<std::uint32_t>(best.feature))) {
                right.rows.push_back(r);
            } else {
                left.rows.push_back(r);
            }
        }
        left.sum_g = parent_g - best.g_one;
        left.sum_h = parent_h - best.h_one;
        right.sum_g = best.g_one;
        right.sum_h = best.h_one;
        left.depth = right.depth = child_depth;

        left.node = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        right.node = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        TreeNode& split_node = tree.nodes[static_cast<std::size_t>(parent_node)];
        split_node.feature = best.feature;
        split_node.left = left.node;
        split_node.right = right.node;
        split_node.gain = best.gain;

        tree.depth = std::max(tree.depth, child_depth);
        find_best_split(ds, gradients, hessians, hp, left, scratch);
        find_best_split(ds, gradients, hessians, hp, right, scratch);
        leaves.push_back(std::move(left));
        leaves.push_back(std::move(right));
        ++n_leaves;
    }

    for (const LeafState& leaf : leaves) {
        if (!leaf.open) continue;
        tree.nodes[static_cast<std::size_t>(leaf.node)].value =
            newton_value(leaf.sum_g, leaf.sum_h, hp, leaf.rows, refiner);
    }
    tree.n_leaves = n_leaves;
    return tree;
}

TrainOutput train(const EncodedDataset& train_ds, const EncodedDataset& valid_ds,
                  const LabelScheme& scheme, const Hyperparams& hp, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    hp.validate();
    if (workers < 0) workers = worker_count();

    const int n_classes = scheme.n_classes;
    if (n_classes < 2) {
        throw Error(ErrorCategory::config, "training requires at least 2 classes");
    }
    if (train_ds.n_rows == 0 || valid_ds.n_rows == 0) {
        throw Error(ErrorCategory::data, "training and validation sets must be non-empty");
    }
    if (train_ds.labels.size() != train_ds.n_rows || valid_ds.labels.size() != valid_ds.n_rows) {
        throw Error(ErrorCategory::data, "datasets must carry labels");
    }
    if (train_ds.vocab.fingerprint() != valid_ds.vocab.fingerprint()) {
        throw Error(ErrorCategory::data, "train and validation vocabulary mismatch");
    }

    const std::size_t n = train_ds.n_rows;
    const std::size_t m = valid_ds.n_rows;
    const auto k = static_cast<std::size_t>(n_classes);

    std::vector<std::size_t> class_counts(k, 0);
    for (int label : train_ds.labels) {
        if (label < 0 || label >= n_classes) {
            throw Error(ErrorCategory::data, "training label out of range");
        }
        ++class_counts[static_cast<std::size_t>(label)];
    }
    for (int label : valid_ds.labels) {
        if (label < 0 || label >= n_classes) {
            throw Error(ErrorCategory::data, "validation label out of range");
        }
    }
    if (std::count_if(class_counts.begin(), class_counts.end(),
                      [](std::size_t c) { return c > 0; }) < 2) {
        throw Error(ErrorCategory::data, "training set holds a single class");
    }

    BoostedModel model;
    model.n_classes = n_classes;
    model.n_features = train_ds.n_features;
    model.hp = hp;
    model.vocab_fingerprint = train_ds.vocab.fingerprint();
    model.scheme = scheme;
    model.base_scores.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        const double p = static_cast<double>(class_counts[c]) / static_cast<double>(n);
        model.base_scores[c] = std::log(std::max(p, kBaseScoreFloor));
    }

    // Row-major score matrices.
    std::vector<double> train_scores(n * k), valid_scores(m * k);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(model.base_scores.begin(), model.base_scores.end(),
                  train_scores.begin() + static_cast<std::ptrdiff_t>(i * k));
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::copy(model.base_scores.begin(), model.base_scores.end(),
                  valid_scores.begin() + static_cast<std::ptrdiff_t>(i * k));
    }

    // Class-major gradient/hessian matrices.
    std::vector<double> grad(k * n), hess(k * n);

    TrainReport report;
    double best_valid_loss = std::numeric_limits<double>::infinity();
    int best_round = 0;
    std::vector<Tree> round_trees(k);

    for (int round = 0; round < hp.n_rounds_max; ++round) {
        parallel_rows(n, workers, [&](std::size_t begin, std::size_t end) {
            std::vector<double> probs(k);
            for (std::size_t i = begin; i < end; ++i) {
                std::span<const double> row(train_scores.data() + i * k, k);
                softmax(row, probs);
                const auto y = static_cast<std::size_t>(train_ds.labels[i]);
                for (std::size_t c = 0; c < k; ++c) {
                    grad[c * n + i] = probs[c] - (c == y ? 1.0 : 0.0);
                    hess[c * n + i] = probs[c] * (1.0 - probs[c]);
                }
            }
        });

        parallel_for(k, workers, [&](std::size_t c) {
            const ScoreShiftSource refiner(train_scores, train_ds.labels, n_classes,
                                           static_cast<int>(c));
            round_trees[c] = grow_tree(
                train_ds, std::span<const double>(grad.data() + c * n, n),
                std::span<const double>(hess.data() + c * n, n), hp, &refiner);
        });

        parallel_rows(n, workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                for (std::size_t c = 0; c < k; ++c) {
                    train_scores[i * k + c] +=
                        hp.learning_rate * round_trees[c].predict_row(train_ds, i);
                }
            }
        });
        parallel_rows(m, workers, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                for (std::size_t c = 0; c < k; ++c) {
                    valid_scores[i * k + c] +=
                        hp.learning_rate * round_trees[c].predict_row(valid_ds, i);
                }
            }
        });

        for (std::size_t c = 0; c < k; ++c) {
            model.trees.push_back(std::move(round_trees[c]));
        }

        double train_loss = 0.0;
        std::size_t train_hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::span<const double> row(train_scores.data() + i * k, k);
            train_loss += row_log_loss(row, train_ds.labels[i]);
            train_hits += argmax_lowest(row) == train_ds.labels[i] ? 1 : 0;
        }
        double valid_loss = 0.0;
        std::size_t valid_hits = 0;
        for (std::size_t i = 0; i < m; ++i) {
            std::span<const double> row(valid_scores.data() + i * k, k);
            valid_loss += row_log_loss(row, valid_ds.labels[i]);
            valid_hits += argmax_lowest(row) == valid_ds.labels[i] ? 1 : 0;
        }
        train_loss /= static_cast<double>(n);
        valid_loss /= static_cast<double>(m);

        report.train_loss.push_back(train_loss);
        report.train_accuracy.push_back(static_cast<double>(train_hits) /
                                        static_cast<double>(n));
        report.valid_loss.push_back(valid_loss);
        report.valid_accuracy.push_back(static_cast<double>(valid_hits) /
                                        static_cast<double>(m));

        if (valid_loss < best_valid_loss) {
            best_valid_loss = valid_loss;
            best_round = round;
        } else if (hp.early_stopping_rounds > 0 &&
                   round - best_round >= hp.early_stopping_rounds) {
            report.stopped_early = true;
            break;
        }
    }

    // Keep the model at the best validation round.
    const int kept = best_round + 1;
    model.trees.resize(static_cast<std::size_t>(kept) * k);
    report.train_loss.resize(static_cast<std::size_t>(kept));
    report.train_accuracy.resize(static_cast<std::size_t>(kept));
    report.valid_loss.resize(static_cast<std::size_t>(kept));
    report.valid_accuracy.resize(static_cast<std::size_t>(kept));
    report.rounds_completed = kept;
    report.total_trees = kept * n_classes;
    report.best_round = best_round;

    const RelevanceTable relevance = feature_relevance(model);
    report.relevance_gain = relevance.gain;
    report.relevance_splits = relevance.split_count;

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    return {std::move(model), std::move(report)};
}

std::vector<double> predict_scores(const BoostedModel& model, const EncodedDataset& ds) {
    if (ds.vocab.fingerprint() != model.vocab_fingerprint) {
        throw Error(ErrorCategory::data, "vocabulary fingerprint mismatch");
    }
    const auto k = static_cast<std::size_t>(model.n_classes);
    std::vector<double> probs(ds.n_rows * k);
    std::vector<double> scores(k);
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        std::copy(model.base_scores.begin(), model.base_scores.end(), scores.begin());
        const auto features = ds.row(i);
        for (int round = 0; round < model.rounds(); ++round) {
            for (std::size_t c = 0; c < k; ++c) {
                scores[c] += model.hp.learning_rate *
                             model.tree_at(round, static_cast<int>(c)).predict_features(features);
            }
        }
        softmax(scores, std::span<double>(probs.data() + i * k, k));
    }
    return probs;
}

std::vector<int> predict_class(const BoostedModel& model, const EncodedDataset& ds) {
    const std::vector<double> probs = predict_scores(model, ds);
    const auto k = static_cast<std::size_t>(model.n_classes);
    std::vector<int> classes(ds.n_rows);
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        classes[i] = argmax_lowest(std::span<const double>(probs.data() + i * k, k));
    }
    return classes;
}

RelevanceTable feature_relevance(const BoostedModel& model) {
    RelevanceTable table;
    table.gain.assign(model.n_features, 0.0);
    table.split_count.assign(model.n_features, 0);
    for (const Tree& tree : model.trees) {
        for (const TreeNode& node : tree.nodes) {
            if (node.feature >= 0) {
                table.gain[static_cast<std::size_t>(node.feature)] += node.gain;
                ++table.split_count[static_cast<std::size_t>(node.feature)];
            }
        }
    }
    return table;
}

}  // namespace tfc
