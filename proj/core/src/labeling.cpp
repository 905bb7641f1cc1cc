#include "tfc/labeling.hpp"

#include <algorithm>
#include <string>

#include "tfc/error.hpp"

namespace tfc {

LabelScheme scheme_for(int k) {
    switch (k) {
        case 2:  return {2, {1.0}};
        case 3:  return {3, {1.0, 3.0}};
        case 4:  return {4, {1.0, 3.0, 7.0}};
        case 5:  return {5, {1.0, 3.0, 7.0, 28.0}};
        case 6:  return {6, {1.0, 3.0, 7.0, 28.0, 84.0}};
        case 7:  return {7, {1.0, 2.0, 3.0, 7.0, 28.0, 84.0}};
        case 8:  return {8, {1.0, 2.0, 3.0, 7.0, 14.0, 28.0, 84.0}};
        case 9:  return {9, {0.5, 1.0, 2.0, 3.0, 7.0, 14.0, 28.0, 84.0}};
        case 10: return {10, {0.25, 0.5, 1.0, 2.0, 3.0, 7.0, 14.0, 28.0, 84.0}};
        default:
            throw Error(ErrorCategory::data,
                        "class count must be in [2, 10], got " + std::to_string(k));
    }
}

int assign_label(double lead_time_days, const LabelScheme& scheme) {
    if (!(lead_time_days > 0.0)) {
        throw Error(ErrorCategory::data, "lead time must be positive");
    }
    // Number of boundaries strictly below the value: b == lead lands in the
    // lower class (right-closed intervals).
    const auto& b = scheme.boundaries;
    const auto it = std::lower_bound(b.begin(), b.end(), lead_time_days);
    return static_cast<int>(it - b.begin());
}

std::vector<double> class_distribution(std::span<const int> labels, int n_classes) {
    if (labels.empty()) {
        throw Error(ErrorCategory::data, "class distribution of empty label set");
    }
    if (n_classes < 1) {
        throw Error(ErrorCategory::data, "n_classes must be >= 1");
    }
    std::vector<double> fractions(static_cast<std::size_t>(n_classes), 0.0);
    for (int label : labels) {
        if (label < 0 || label >= n_classes) {
            throw Error(ErrorCategory::data, "label out of range: " + std::to_string(label));
        }
        fractions[static_cast<std::size_t>(label)] += 1.0;
    }
    const double n = static_cast<double>(labels.size());
    for (double& f : fractions) f /= n;
    return fractions;
}

}  // namespace tfc
