#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tfc/labeling.hpp"
#include "tfc/vehicle.hpp"

namespace tfc {

// Limited = characteristics known when the vehicle enters the area
// (config variants, product key, entry time). Unlimited additionally holds
// the in-process captures (priority, inspection codes, parking locations).
enum class FeatureSet { limited, unlimited };

inline std::string_view to_string(FeatureSet fs) {
    return fs == FeatureSet::limited ? "limited" : "unlimited";
}

// Ordered feature names, "<characteristic>:<token>" ("priority" stands
// alone as a single binary column). Group order is fixed with the
// entry-known groups first, so a limited vocabulary is a prefix of the
// unlimited one built from the same table; tokens sort lexicographically
// within each group.
struct Vocabulary {
    std::vector<std::string> names;

    std::size_t size() const { return names.size(); }
    std::uint64_t fingerprint() const;
};

struct EncodeReport {
    std::size_t unknown_tokens = 0;
};

// Binary one-hot matrix in sparse row-major form: row r holds the sorted
// feature ids present (value 1) between row_offsets[r] and row_offsets[r+1].
struct EncodedDataset {
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::vector<std::uint64_t> row_offsets;   // n_rows + 1 entries
    std::vector<std::uint32_t> feature_ids;
    Vocabulary vocab;
    std::vector<std::string> row_ids;
    std::vector<int> labels;                  // empty until attach_labels
    LabelScheme scheme;                       // n_classes == 0 until labeled

    std::span<const std::uint32_t> row(std::size_t r) const {
        return {feature_ids.data() + row_offsets[r],
                feature_ids.data() + row_offsets[r + 1]};
    }

    bool row_has_feature(std::size_t r, std::uint32_t f) const {
        const auto span = row(r);
        return std::binary_search(span.begin(), span.end(), f);
    }
};

// Throws on an empty table.
Vocabulary build_vocabulary(const RawTable& table, FeatureSet set);

// Tokens not present in the vocabulary are dropped and counted; serving must
// not fail on novel codes.
EncodedDataset encode(const RawTable& table, const Vocabulary& vocab,
                      EncodeReport* report = nullptr);

// Removes exactly the all-zero columns and renumbers the survivors; row data
// is otherwise unchanged. Idempotent.
EncodedDataset prune_null_columns(const EncodedDataset& ds);

// New dataset holding the given rows in the given order.
EncodedDataset subset_rows(const EncodedDataset& ds, std::span<const std::uint32_t> rows);

// Assigns per-row class labels from the table's lead times. Table row count
// must match the dataset.
void attach_labels(EncodedDataset& ds, const RawTable& table, const LabelScheme& scheme);

// JSON container with vocabulary, sparse postings, row ids and, when
// present, labels and the label scheme. Written deterministically.
void write_dataset(const EncodedDataset& ds, const std::string& path);
EncodedDataset read_dataset(const std::string& path);

}  // namespace tfc
