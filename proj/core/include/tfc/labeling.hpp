#pragma once

#include <span>
#include <vector>

namespace tfc {

// Day-interval class scheme. boundaries holds n_classes - 1 ascending values;
// class 0 is [0, b1], class i is ]b_i, b_{i+1}], the last class is open-ended.
// Boundaries are right-closed: a lead time exactly on a boundary belongs to
// the lower class.
struct LabelScheme {
    int n_classes = 0;
    std::vector<double> boundaries;
};

// The nine fixed schemes with 2..10 classes. Throws for k outside [2, 10].
LabelScheme scheme_for(int k);

// Class index for a positive lead time in days. Throws for non-positive input.
int assign_label(double lead_time_days, const LabelScheme& scheme);

// Per-class fraction of labels; fractions sum to 1. Throws on empty input.
std::vector<double> class_distribution(std::span<const int> labels, int n_classes);

}  // namespace tfc
