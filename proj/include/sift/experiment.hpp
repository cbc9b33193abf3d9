#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sift/dataset.hpp"
#include "sift/learning.hpp"
#include "sift/selection.hpp"
#include "sift/utility.hpp"
#include "sift/valuation.hpp"

namespace sift {

// Config (de)serialization. from_json starts from the defaults and applies
// only the keys present, so hand-written configs can stay short while the
// emitted resolved configs are complete. Output paths are never part of a
// config: a config describes the computation, not where it lands.
void to_json(nlohmann::json& j, const LogisticTrainConfig& cfg);
void from_json(const nlohmann::json& j, LogisticTrainConfig& cfg);
void to_json(nlohmann::json& j, const TrainConfig& cfg);
void from_json(const nlohmann::json& j, TrainConfig& cfg);

// The inspection-fraction grid every detection curve is sampled on:
// 21 points {0, 0.05, ..., 1.0}.
std::vector<double> inspection_grid();

// One ranking's detection curve. Constructed only through make(), which
// enforces the invariants: coordinates in [0,1] and non-decreasing, first
// point (0,0), last point (1,1). auc is the trapezoid integral.
struct DetectionCurve {
    std::string method;
    std::vector<double> inspected;
    std::vector<double> detected;
    double auc = 0.0;

    static DetectionCurve make(std::string method, std::vector<double> inspected,
                               std::vector<double> detected);
};

// One (method, seed) run. accuracy[g] is the proxy's validation accuracy
// after retraining on the points that survive inspecting the worst
// grid[g] fraction; accuracy[0] is the unfiltered baseline.
struct DetectionSeries {
    std::uint64_t seed = 0;
    DetectionCurve curve;
    std::vector<double> accuracy;
};

struct SkippedMethod {
    std::string method;
    std::string reason;  // "capacity_exceeded" | "unknown_method"
};

struct DetectionConfig {
    int n = 100;
    int d = 10;
    std::string corruption = "label_flip";  // or "feature_noise"
    double fraction = 0.15;
    double sigma = 1.0;  // feature_noise only
    int validation_size = 300;
    std::vector<std::string> methods{"datasifter", "random", "loo", "knn-sv"};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int budget = 4000;  // oracle evaluations granted to each sampling method
    double epsilon = 0.01;
    int width = 64;
    TrainConfig train{.epochs = 30, .learning_rate = 1e-3};
    LogisticTrainConfig proxy;
    int knn_k = 5;
    double tmc_tolerance = 0.01;
};
void to_json(nlohmann::json& j, const DetectionConfig& cfg);
void from_json(const nlohmann::json& j, DetectionConfig& cfg);

struct DetectionResult {
    DetectionConfig config;
    // One entry per runnable method, in config order; inner vector follows
    // config.seeds order.
    std::vector<std::pair<std::string, std::vector<DetectionSeries>>> curves;
    std::vector<SkippedMethod> skipped;
};

// For every seed: generate the dataset, corrupt it, build the proxy oracle,
// rank the training points harmful-first with each method, then sweep the
// inspection grid recording detected fraction and retrained accuracy.
DetectionResult run_detection_experiment(const DetectionConfig& cfg);

// Mean and sample standard deviation across seeds, per grid point.
struct MethodAggregate {
    std::string method;
    std::vector<double> mean_detected, std_detected;
    std::vector<double> mean_accuracy, std_accuracy;
    double mean_auc = 0.0, std_auc = 0.0;
};
std::vector<MethodAggregate> aggregate_detection(const DetectionResult& result);

// Writes curves.csv (header: method,seed,fraction_inspected,
// fraction_detected,accuracy), summary.json, config.json.
void emit_detection_results(const std::string& out_dir, const DetectionResult& result);

// ---- redundancy demo ----

struct RedundancyConfig {
    int max_k = 10;
    std::vector<std::string> methods{"exact-shapley", "loo", "least-core"};  // linear heuristics
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int validation_per_class = 25;
    int budget = 2000;
    double epsilon = 0.1;
    int width = 32;
    TrainConfig train{.epochs = 40, .learning_rate = 1e-3};
    LogisticTrainConfig proxy;
    int knn_k = 5;
};
void to_json(nlohmann::json& j, const RedundancyConfig& cfg);
void from_json(const nlohmann::json& j, RedundancyConfig& cfg);

struct RedundancyRow {
    std::string method;
    std::vector<SubsetMask> selection;  // index k-1
    std::vector<double> utility;        // true oracle utility of selection[k-1]
};

struct RedundancySeedResult {
    std::uint64_t seed = 0;
    double majority_accuracy = 0.0;  // empty-selection utility
    std::vector<RedundancyRow> rows;  // config methods, then "optimal", then "datasifter"
};

struct RedundancyResult {
    RedundancyConfig config;
    std::vector<RedundancySeedResult> per_seed;
};

// The replicated-negatives instance: linear heuristics rank by score and
// take top-k; exhaustive search and the learn-then-optimize pipeline pick
// sets directly. Utilities are tabulated for k = 1..max_k against the true
// proxy oracle.
RedundancyResult run_redundancy_demo(const RedundancyConfig& cfg);

// Writes table.csv (header: method,seed,k,utility), summary.json, config.json.
void emit_redundancy_results(const std::string& out_dir, const RedundancyResult& result);

// Validation pool drawn from the same cloud as the redundancy instance but
// balanced per class and kept away from the class boundary, so a single-class
// constant predictor scores exactly 0.5 and any mixed training set separates
// every probe point.
Dataset balanced_validation_2d(int per_class, std::uint64_t seed);

// ---- utility-fit report ----

struct FitConfig {
    int n = 50;
    int d = 10;
    int num_samples = 800;
    int held_out = 200;
    int validation_size = 300;
    std::uint64_t seed = 1;
    int width = 64;
    TrainConfig train{.epochs = 60, .learning_rate = 1e-3};
    LogisticTrainConfig proxy;
};
void to_json(nlohmann::json& j, const FitConfig& cfg);
void from_json(const nlohmann::json& j, FitConfig& cfg);

struct FitReport {
    FitConfig config;
    std::vector<double> true_utility;       // held-out masks
    std::vector<double> predicted_utility;  // same order
    double pearson = 0.0;
    double spearman = 0.0;
    double train_pearson = 0.0;
    std::vector<double> loss_trace;
};

// Trains the set regressor on sampled utilities and scores it on held-out
// masks that never appeared in training (drawn from a separate stream,
// de-duplicated against the training masks).
FitReport run_utility_fit_report(const FitConfig& cfg);

// Writes scatter.csv (header: true_utility,predicted_utility), summary.json,
// config.json.
void emit_fit_report(const std::string& out_dir, const FitReport& report);

}  // namespace sift
