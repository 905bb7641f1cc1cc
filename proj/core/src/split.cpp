#include "tfc/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "tfc/error.hpp"
#include "tfc/rng.hpp"

namespace tfc {

namespace {

// Rows of each class in input order, keyed by ascending class id.
std::map<int, std::vector<std::uint32_t>> group_by_class(std::span<const int> labels) {
    std::map<int, std::vector<std::uint32_t>> groups;
    for (std::uint32_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            throw Error(ErrorCategory::data, "negative class label");
        }
        groups[labels[i]].push_back(i);
    }
    return groups;
}

void shuffle(std::vector<std::uint32_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.below(i)]);
    }
}

// Largest-remainder apportionment of n into parts proportional to fractions.
// Remainder ties go to the earlier part, so allocation is deterministic.
std::vector<std::size_t> largest_remainder(std::size_t n, std::span<const double> fractions) {
    std::vector<std::size_t> counts(fractions.size(), 0);
    std::vector<double> remainders(fractions.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t j = 0; j < fractions.size(); ++j) {
        const double quota = static_cast<double>(n) * fractions[j];
        counts[j] = static_cast<std::size_t>(std::floor(quota));
        remainders[j] = quota - std::floor(quota);
        assigned += counts[j];
    }
    std::vector<std::size_t> order(fractions.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainders[a] > remainders[b];
    });
    for (std::size_t j = 0; assigned < n; ++j) {
        ++counts[order[j % order.size()]];
        ++assigned;
    }
    return counts;
}

}  // namespace

SplitIndices stratified_split(std::span<const int> labels, std::array<double, 3> fractions,
                              std::uint64_t seed) {
    if (labels.empty()) {
        throw Error(ErrorCategory::data, "cannot split an empty label set");
    }
    double total = 0.0;
    for (double f : fractions) {
        if (f < 0.0) throw Error(ErrorCategory::config, "split fractions must be >= 0");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCategory::config, "split fractions must sum to 1");
    }

    SplitIndices out;
    out.seed = seed;
    Rng rng(derive_seed(seed, 0x5B17));

    for (auto& [cls, rows] : group_by_class(labels)) {
        if (rows.size() < 3) {
            out.warnings.push_back("class " + std::to_string(cls) + " has only " +
                                   std::to_string(rows.size()) +
                                   " rows; surplus routed to train");
        }
        shuffle(rows, rng);
        const auto counts = largest_remainder(rows.size(), fractions);
        std::size_t at = 0;
        for (std::size_t j = 0; j < counts[0]; ++j) out.train.push_back(rows[at++]);
        for (std::size_t j = 0; j < counts[1]; ++j) out.valid.push_back(rows[at++]);
        for (std::size_t j = 0; j < counts[2]; ++j) out.test.push_back(rows[at++]);
    }

    std::sort(out.train.begin(), out.train.end());
    std::sort(out.valid.begin(), out.valid.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) {
        throw Error(ErrorCategory::config, "k-fold requires k >= 2");
    }
    if (static_cast<std::size_t>(k) > labels.size()) {
        throw Error(ErrorCategory::config, "k exceeds the number of rows");
    }

    FoldPlan plan;
    plan.seed = seed;
    plan.folds.assign(static_cast<std::size_t>(k), {});
    Rng rng(derive_seed(seed, 0xF01D));

    // Deal each class round-robin, carrying the fold cursor across classes so
    // total fold sizes stay within one of each other.
    std::size_t cursor = 0;
    for (auto& [cls, rows] : group_by_class(labels)) {
        if (rows.size() < static_cast<std::size_t>(k)) {
            plan.warnings.push_back("class " + std::to_string(cls) + " has fewer than " +
                                    std::to_string(k) + " rows; folds are best effort");
        }
        shuffle(rows, rng);
        for (std::uint32_t row : rows) {
            plan.folds[cursor % static_cast<std::size_t>(k)].push_back(row);
            ++cursor;
        }
    }

    for (auto& fold : plan.folds) std::sort(fold.begin(), fold.end());
    return plan;
}

void write_split_json(const SplitIndices& split, const std::string& path) {
    nlohmann::json j;
    j["seed"] = split.seed;
    j["train"] = split.train;
    j["valid"] = split.valid;
    j["test"] = split.test;
    if (!split.warnings.empty()) j["warnings"] = split.warnings;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
    out << j.dump() << '\n';
    if (!out) throw Error(ErrorCategory::io, "failed writing " + path);
}

}  // namespace tfc
