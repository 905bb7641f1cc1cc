#include <fstream>

#include <json.hpp>

#include "tfc/error.hpp"
#include "tfc/gbdt.hpp"
#include "tfc/numstr.hpp"

namespace tfc {

namespace {

using nlohmann::json;

constexpr int kModelFormatVersion = 1;

json hp_to_json(const Hyperparams& hp) {
    json j;
    j["learning_rate"] = dtos(hp.learning_rate);
    j["num_leaves"] = hp.num_leaves;
    j["max_depth"] = hp.max_depth;
    j["leaf_estimation_iterations"] = hp.leaf_estimation_iterations;
    j["leaf_l2_reg"] = dtos(hp.leaf_l2_reg);
    j["n_rounds_max"] = hp.n_rounds_max;
    j["early_stopping_rounds"] = hp.early_stopping_rounds;
    j["min_data_in_leaf"] = hp.min_data_in_leaf;
    j["min_gain"] = dtos(hp.min_gain);
    return j;
}

Hyperparams hp_from_json(const json& j) {
    Hyperparams hp;
    hp.learning_rate = parse_double(j.at("learning_rate").get<std::string>());
    hp.num_leaves = j.at("num_leaves").get<int>();
    hp.max_depth = j.at("max_depth").get<int>();
    hp.leaf_estimation_iterations = j.at("leaf_estimation_iterations").get<int>();
    hp.leaf_l2_reg = parse_double(j.at("leaf_l2_reg").get<std::string>());
    hp.n_rounds_max = j.at("n_rounds_max").get<int>();
    hp.early_stopping_rounds = j.at("early_stopping_rounds").get<int>();
    hp.min_data_in_leaf = j.at("min_data_in_leaf").get<int>();
    hp.min_gain = parse_double(j.at("min_gain").get<std::string>());
    return hp;
}

}  // namespace

void save_model(const BoostedModel& model, const std::string& path) {
    json j;
    j["format"] = "tfc-gbdt";
    j["format_version"] = kModelFormatVersion;
    j["n_classes"] = model.n_classes;
    j["n_features"] = model.n_features;
    j["vocab_fingerprint"] = to_hex(model.vocab_fingerprint);
    j["hyperparams"] = hp_to_json(model.hp);

    json base = json::array();
    for (double s : model.base_scores) base.push_back(dtos(s));
    j["base_scores"] = std::move(base);

    json scheme;
    scheme["n_classes"] = model.scheme.n_classes;
    json bounds = json::array();
    for (double b : model.scheme.boundaries) bounds.push_back(dtos(b));
    scheme["boundaries"] = std::move(bounds);
    j["label_scheme"] = std::move(scheme);

    json trees = json::array();
    for (const Tree& tree : model.trees) {
        json t;
        t["n_leaves"] = tree.n_leaves;
        t["depth"] = tree.depth;
        json nodes = json::array();
        for (const TreeNode& node : tree.nodes) {
            // [feature, left, right, value, gain]; feature -1 marks a leaf.
            nodes.push_back(json::array(
                {node.feature, node.left, node.right, dtos(node.value), dtos(node.gain)}));
        }
        t["nodes"] = std::move(nodes);
        trees.push_back(std::move(t));
    }
    j["trees"] = std::move(trees);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
    out << j.dump() << '\n';
    if (!out) throw Error(ErrorCategory::io, "failed writing " + path);
}

BoostedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::io, "cannot open " + path);

    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema, "invalid model file " + path + ": " + e.what());
    }

    BoostedModel model;
    try {
        if (j.at("format").get<std::string>() != "tfc-gbdt") {
            throw Error(ErrorCategory::schema, path + " is not a model file");
        }
        if (j.at("format_version").get<int>() != kModelFormatVersion) {
            throw Error(ErrorCategory::schema, "unsupported model format version in " + path);
        }
        model.n_classes = j.at("n_classes").get<int>();
        model.n_features = j.at("n_features").get<std::size_t>();

        const std::string fp = j.at("vocab_fingerprint").get<std::string>();
        if (fp.size() != 16) {
            throw Error(ErrorCategory::schema, "bad vocabulary fingerprint in " + path);
        }
        model.vocab_fingerprint = 0;
        for (char c : fp) {
            const int digit = c >= '0' && c <= '9'   ? c - '0'
                              : c >= 'a' && c <= 'f' ? c - 'a' + 10
                                                     : -1;
            if (digit < 0) {
                throw Error(ErrorCategory::schema, "bad vocabulary fingerprint in " + path);
            }
            model.vocab_fingerprint = model.vocab_fingerprint << 4 | static_cast<unsigned>(digit);
        }

        model.hp = hp_from_json(j.at("hyperparams"));

        for (const auto& s : j.at("base_scores")) {
            model.base_scores.push_back(parse_double(s.get<std::string>()));
        }
        if (model.n_classes < 2 ||
            model.base_scores.size() != static_cast<std::size_t>(model.n_classes)) {
            throw Error(ErrorCategory::schema, "inconsistent class count in " + path);
        }

        const auto& scheme = j.at("label_scheme");
        model.scheme.n_classes = scheme.at("n_classes").get<int>();
        for (const auto& b : scheme.at("boundaries")) {
            model.scheme.boundaries.push_back(parse_double(b.get<std::string>()));
        }

        for (const auto& t : j.at("trees")) {
            Tree tree;
            tree.n_leaves = t.at("n_leaves").get<int>();
            tree.depth = t.at("depth").get<int>();
            for (const auto& entry : t.at("nodes")) {
                if (!entry.is_array() || entry.size() != 5) {
                    throw Error(ErrorCategory::schema, "bad tree node in " + path);
                }
                TreeNode node;
                node.feature = entry[0].get<std::int32_t>();
                node.left = entry[1].get<std::int32_t>();
                node.right = entry[2].get<std::int32_t>();
                node.value = parse_double(entry[3].get<std::string>());
                node.gain = parse_double(entry[4].get<std::string>());
                if (node.feature >= 0 &&
                    static_cast<std::size_t>(node.feature) >= model.n_features) {
                    throw Error(ErrorCategory::schema, "feature id out of range in " + path);
                }
                tree.nodes.push_back(node);
            }
            if (tree.nodes.empty()) {
                throw Error(ErrorCategory::schema, "empty tree in " + path);
            }
            for (const TreeNode& node : tree.nodes) {
                if (node.feature >= 0) {
                    const auto sz = static_cast<std::int32_t>(tree.nodes.size());
                    if (node.left < 0 || node.left >= sz || node.right < 0 || node.right >= sz) {
                        throw Error(ErrorCategory::schema, "bad child index in " + path);
                    }
                }
            }
            model.trees.push_back(std::move(tree));
        }
        if (model.trees.size() % static_cast<std::size_t>(model.n_classes) != 0) {
            throw Error(ErrorCategory::schema, "tree count is not a class multiple in " + path);
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCategory::schema, "invalid model file " + path + ": " + e.what());
    }
    return model;
}

}  // namespace tfc
