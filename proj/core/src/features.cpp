#include "tfc/features.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "tfc/error.hpp"
#include "tfc/numstr.hpp"

namespace tfc {

namespace {

constexpr std::string_view kGroupConfig = "config_variant:";
constexpr std::string_view kGroupProduct = "product_key:";
constexpr std::string_view kGroupEntry = "entry:";
constexpr std::string_view kPriorityName = "priority";
constexpr std::string_view kGroupInspection = "inspection_code:";
constexpr std::string_view kGroupParking = "parking_location:";

void append_group(std::vector<std::string>& names, std::string_view prefix,
                  const std::set<std::string>& tokens) {
    for (const std::string& token : tokens) {
        std::string name(prefix);
        name += token;
        names.push_back(std::move(name));
    }
}

}  // namespace

std::uint64_t Vocabulary::fingerprint() const {
    std::uint64_t h = fnv1a64("tfc-vocab-v1");
    for (const std::string& name : names) {
        h = fnv1a64(name, h);
        h = fnv1a64("\n", h);
    }
    return h;
}

Vocabulary build_vocabulary(const RawTable& table, FeatureSet set) {
    if (table.empty()) {
        throw Error(ErrorCategory::data, "cannot build a vocabulary from an empty table");
    }

    std::set<std::string> config, product, entry, inspection, parking;
    for (const VehicleRecord& rec : table.records) {
        for (const auto& t : rec.config_variants) config.insert(t);
        product.insert(rec.product_key);
        entry.insert(rec.entry_weekday_hour);
        if (set == FeatureSet::unlimited) {
            for (const auto& t : rec.inspection_codes) inspection.insert(t);
            for (const auto& t : rec.parking_locations) parking.insert(t);
        }
    }

    Vocabulary vocab;
    append_group(vocab.names, kGroupConfig, config);
    append_group(vocab.names, kGroupProduct, product);
    append_group(vocab.names, kGroupEntry, entry);
    if (set == FeatureSet::unlimited) {
        vocab.names.emplace_back(kPriorityName);
        append_group(vocab.names, kGroupInspection, inspection);
        append_group(vocab.names, kGroupParking, parking);
    }
    return vocab;
}

EncodedDataset encode(const RawTable& table, const Vocabulary& vocab, EncodeReport* report) {
    std::unordered_map<std::string_view, std::uint32_t> index;
    index.reserve(vocab.names.size());
    for (std::uint32_t i = 0; i < vocab.names.size(); ++i) {
        index.emplace(vocab.names[i], i);
    }

    EncodedDataset ds;
    ds.n_rows = table.records.size();
    ds.n_features = vocab.names.size();
    ds.vocab = vocab;
    ds.row_offsets.reserve(ds.n_rows + 1);
    ds.row_offsets.push_back(0);
    ds.row_ids.reserve(ds.n_rows);

    std::size_t unknown = 0;
    std::string scratch;
    std::vector<std::uint32_t> row;

    auto add = [&](std::string_view prefix, const std::string& token) {
        scratch.assign(prefix);
        scratch += token;
        const auto it = index.find(std::string_view(scratch));
        if (it == index.end()) {
            ++unknown;
        } else {
            row.push_back(it->second);
        }
    };

    const auto priority_it = index.find(kPriorityName);

    for (const VehicleRecord& rec : table.records) {
        row.clear();
        for (const auto& t : rec.config_variants) add(kGroupConfig, t);
        add(kGroupProduct, rec.product_key);
        add(kGroupEntry, rec.entry_weekday_hour);
        if (priority_it != index.end() && rec.priority == 1) {
            row.push_back(priority_it->second);
        }
        for (const auto& t : rec.inspection_codes) add(kGroupInspection, t);
        for (const auto& t : rec.parking_locations) add(kGroupParking, t);

        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        ds.feature_ids.insert(ds.feature_ids.end(), row.begin(), row.end());
        ds.row_offsets.push_back(ds.feature_ids.size());
        ds.row_ids.push_back(rec.vehicle_id);
    }

    if (report) report->unknown_tokens = unknown;
    return ds;
}

EncodedDataset prune_null_columns(const EncodedDataset& ds) {
    std::vector<bool> used(ds.n_features, false);
    for (std::uint32_t f : ds.feature_ids) used[f] = true;

    std::vector<std::uint32_t> remap(ds.n_features, 0);
    EncodedDataset out;
    out.vocab.names.reserve(ds.n_features);
    std::uint32_t next = 0;
    for (std::size_t f = 0; f < ds.n_features; ++f) {
        if (used[f]) {
            remap[f] = next++;
            out.vocab.names.push_back(ds.vocab.names[f]);
        }
    }

    out.n_rows = ds.n_rows;
    out.n_features = next;
    out.row_offsets = ds.row_offsets;
    out.feature_ids.reserve(ds.feature_ids.size());
    for (std::uint32_t f : ds.feature_ids) out.feature_ids.push_back(remap[f]);
    out.row_ids = ds.row_ids;
    out.labels = ds.labels;
    out.scheme = ds.scheme;
    return out;
}

EncodedDataset subset_rows(const EncodedDataset& ds, std::span<const std::uint32_t> rows) {
    EncodedDataset out;
    out.n_features = ds.n_features;
    out.vocab = ds.vocab;
    out.scheme = ds.scheme;
    out.n_rows = rows.size();
    out.row_offsets.reserve(rows.size() + 1);
    out.row_offsets.push_back(0);
    out.row_ids.reserve(rows.size());
    if (!ds.labels.empty()) out.labels.reserve(rows.size());

    for (std::uint32_t r : rows) {
        if (r >= ds.n_rows) {
            throw Error(ErrorCategory::internal, "row index out of range in subset_rows");
        }
        const auto span = ds.row(r);
        out.feature_ids.insert(out.feature_ids.end(), span.begin(), span.end());
        out.row_offsets.push_back(out.feature_ids.size());
        out.row_ids.push_back(ds.row_ids[r]);
        if (!ds.labels.empty()) out.labels.push_back(ds.labels[r]);
    }
    return out;
}

void attach_labels(EncodedDataset& ds, const RawTable& table, const LabelScheme& scheme) {
    if (table.records.size() != ds.n_rows) {
        throw Error(ErrorCategory::data, "label table size does not match dataset");
    }
    ds.labels.clear();
    ds.labels.reserve(ds.n_rows);
    for (const VehicleRecord& rec : table.records) {
        ds.labels.push_back(assign_label(rec.lead_time_days, scheme));
    }
    ds.scheme = scheme;
}

}  // namespace tfc
