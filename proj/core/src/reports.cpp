#include "tfc/reports.hpp"

#include <json.hpp>

#include "tfc/numstr.hpp"

namespace tfc {

namespace {

using nlohmann::json;

json metrics_to_json(const Metrics& m) {
    json j;
    j["accuracy"] = dtos(m.accuracy);
    j["macro_f1"] = dtos(m.macro_f1);
    json precision = json::array(), recall = json::array(), f1 = json::array();
    for (double v : m.precision) precision.push_back(dtos(v));
    for (double v : m.recall) recall.push_back(dtos(v));
    for (double v : m.f1) f1.push_back(dtos(v));
    j["precision"] = std::move(precision);
    j["recall"] = std::move(recall);
    j["f1"] = std::move(f1);
    j["confusion"] = m.confusion;
    return j;
}

json series(const std::vector<double>& values) {
    json arr = json::array();
    for (double v : values) arr.push_back(dtos(v));
    return arr;
}

}  // namespace

std::string to_report_json(const Metrics& metrics) {
    json j = metrics_to_json(metrics);
    j["type"] = "metrics";
    return j.dump();
}

std::string to_report_json(const ComparisonReport& report) {
    json j;
    j["type"] = "comparison";
    j["model"] = metrics_to_json(report.model);
    j["baseline"] = metrics_to_json(report.baseline);
    j["delta_points"] = dtos(report.delta_points);
    j["delta_relative_pct"] = dtos(report.delta_relative_pct);
    j["prepare_seconds"] = dtos(report.prepare_seconds);
    j["classify_seconds"] = dtos(report.classify_seconds);
    j["n_classes"] = report.n_classes;
    j["n_rows"] = report.n_rows;
    return j.dump();
}

std::string to_report_json(const DriftReport& report) {
    json j;
    j["type"] = "drift";
    j["accuracy_pre"] = dtos(report.accuracy_pre);
    j["accuracy_stale"] = dtos(report.accuracy_stale);
    j["accuracy_retrained"] = dtos(report.accuracy_retrained);
    j["magnitude"] = dtos(report.magnitude);
    j["n_classes"] = report.n_classes;
    j["n_vehicles"] = report.n_vehicles;
    j["seed"] = report.seed;
    return j.dump();
}

std::string to_report_json(const TrainReport& report) {
    json j;
    j["type"] = "train_report";
    j["rounds_completed"] = report.rounds_completed;
    j["total_trees"] = report.total_trees;
    j["stopped_early"] = report.stopped_early;
    j["best_round"] = report.best_round;
    j["train_loss"] = series(report.train_loss);
    j["train_accuracy"] = series(report.train_accuracy);
    j["valid_loss"] = series(report.valid_loss);
    j["valid_accuracy"] = series(report.valid_accuracy);
    j["wall_time_seconds"] = dtos(report.wall_time_seconds);
    j["relevance_gain"] = series(report.relevance_gain);
    j["relevance_splits"] = report.relevance_splits;
    return j.dump();
}

std::string to_report_json(const TuneResult& result) {
    json j;
    j["type"] = "tune_result";
    j["k"] = result.k;
    j["fold_seed"] = result.fold_seed;
    j["wall_time_seconds"] = dtos(result.wall_time_seconds);
    json records = json::array();
    for (const TuneRecord& rec : result.records) {
        json r;
        r["combination_id"] = rec.combination_id;
        r["learning_rate"] = dtos(rec.hp.learning_rate);
        r["num_leaves"] = rec.hp.num_leaves;
        r["max_depth"] = rec.hp.max_depth;
        r["leaf_estimation_iterations"] = rec.hp.leaf_estimation_iterations;
        r["leaf_l2_reg"] = dtos(rec.hp.leaf_l2_reg);
        r["fold_accuracy"] = series(rec.fold_accuracy);
        r["mean"] = dtos(rec.mean);
        r["std"] = dtos(rec.stddev);
        records.push_back(std::move(r));
    }
    j["records"] = std::move(records);
    return j.dump();
}

std::string to_report_json(const FilterReport& report) {
    json j;
    j["type"] = "filter_report";
    j["input_rows"] = report.input_rows;
    j["kept"] = report.kept;
    j["removed_non_series"] = report.removed_non_series;
    j["removed_incomplete"] = report.removed_incomplete;
    return j.dump();
}

std::string confusion_csv(const Metrics& metrics) {
    const std::size_t k = metrics.confusion.size();
    std::string out = "actual\\predicted";
    for (std::size_t c = 0; c < k; ++c) out += ",class" + std::to_string(c);
    out += '\n';
    for (std::size_t a = 0; a < k; ++a) {
        out += "class" + std::to_string(a);
        for (std::size_t p = 0; p < k; ++p) {
            out += ',' + std::to_string(metrics.confusion[a][p]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace tfc
