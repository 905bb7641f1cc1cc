#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tfc/error.hpp"
#include "tfc/features.hpp"
#include "tfc/numstr.hpp"

namespace tfc {

namespace {

using nlohmann::json;

constexpr int kDatasetFormatVersion = 1;

json scheme_to_json(const LabelScheme& scheme) {
    json j;
    j["n_classes"] = scheme.n_classes;
    json bounds = json::array();
    for (double b : scheme.boundaries) bounds.push_back(dtos(b));
    j["boundaries"] = std::move(bounds);
    return j;
}

LabelScheme scheme_from_json(const json& j) {
    LabelScheme scheme;
    scheme.n_classes = j.at("n_classes").get<int>();
    for (const auto& b : j.at("boundaries")) {
        scheme.boundaries.push_back(parse_double(b.get<std::string>()));
    }
    return scheme;
}

}  // namespace

void write_dataset(const EncodedDataset& ds, const std::string& path) {
    json j;
    j["format"] = "tfc-dataset";
    j["format_version"] = kDatasetFormatVersion;
    j["n_rows"] = ds.n_rows;
    j["n_features"] = ds.n_features;
    j["vocabulary"] = ds.vocab.names;
    j["fingerprint"] = to_hex(ds.vocab.fingerprint());
    j["row_ids"] = ds.row_ids;

    json rows = json::array();
    for (std::size_t r = 0; r < ds.n_rows; ++r) {
        const auto span = ds.row(r);
        rows.push_back(json(std::vector<std::uint32_t>(span.begin(), span.end())));
    }
    j["rows"] = std::move(rows);

    if (!ds.labels.empty()) {
        j["labels"] = ds.labels;
        j["scheme"] = scheme_to_json(ds.scheme);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
    out << j.dump();
    out << '\n';
    if (!out) throw Error(ErrorCategory::io, "failed writing " + path);
}

EncodedDataset read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::io, "cannot open " + path);

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema, "invalid dataset container " + path + ": " + e.what());
    }

    EncodedDataset ds;
    try {
        if (j.at("format").get<std::string>() != "tfc-dataset") {
            throw Error(ErrorCategory::schema, path + " is not a dataset container");
        }
        if (j.at("format_version").get<int>() != kDatasetFormatVersion) {
            throw Error(ErrorCategory::schema, "unsupported dataset format version in " + path);
        }
        ds.n_rows = j.at("n_rows").get<std::size_t>();
        ds.n_features = j.at("n_features").get<std::size_t>();
        ds.vocab.names = j.at("vocabulary").get<std::vector<std::string>>();
        ds.row_ids = j.at("row_ids").get<std::vector<std::string>>();

        const auto& rows = j.at("rows");
        if (rows.size() != ds.n_rows || ds.row_ids.size() != ds.n_rows ||
            ds.vocab.names.size() != ds.n_features) {
            throw Error(ErrorCategory::schema, "inconsistent dataset container " + path);
        }
        ds.row_offsets.reserve(ds.n_rows + 1);
        ds.row_offsets.push_back(0);
        for (const auto& row : rows) {
            for (const auto& f : row) {
                const auto id = f.get<std::uint32_t>();
                if (id >= ds.n_features) {
                    throw Error(ErrorCategory::schema, "feature id out of range in " + path);
                }
                ds.feature_ids.push_back(id);
            }
            ds.row_offsets.push_back(ds.feature_ids.size());
        }

        if (j.contains("labels")) {
            ds.labels = j.at("labels").get<std::vector<int>>();
            if (ds.labels.size() != ds.n_rows) {
                throw Error(ErrorCategory::schema, "label count mismatch in " + path);
            }
            ds.scheme = scheme_from_json(j.at("scheme"));
        }

        const std::string stored = j.at("fingerprint").get<std::string>();
        if (stored != to_hex(ds.vocab.fingerprint())) {
            throw Error(ErrorCategory::schema, "vocabulary fingerprint mismatch in " + path);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema, "invalid dataset container " + path + ": " + e.what());
    }
    return ds;
}

}  // namespace tfc
