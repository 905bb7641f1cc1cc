#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tfc {

// Disjoint train/validation/test row indices covering every input row.
// Per-class allocation follows largest-remainder apportionment of the class
// size to the fractions, so counts are exact, not approximate.
struct SplitIndices {
    std::vector<std::uint32_t> train;
    std::vector<std::uint32_t> valid;
    std::vector<std::uint32_t> test;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;  // e.g. classes too small to stratify
};

SplitIndices stratified_split(std::span<const int> labels,
                              std::array<double, 3> fractions = {0.8, 0.1, 0.1},
                              std::uint64_t seed = 42);

// k disjoint folds covering all rows; fold sizes differ by at most one and
// per-class counts per fold are within one of proportional.
struct FoldPlan {
    std::vector<std::vector<std::uint32_t>> folds;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

FoldPlan stratified_kfold(std::span<const int> labels, int k = 5, std::uint64_t seed = 42);

// Audit export: indices per part as a JSON document.
void write_split_json(const SplitIndices& split, const std::string& path);

}  // namespace tfc
