#include "sift/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "sift/errors.hpp"
#include "sift/io.hpp"
#include "sift/least_core.hpp"
#include "sift/rng.hpp"

namespace sift {

namespace {

using nlohmann::json;

void check_kind(const json& j, const char* want) {
    if (j.contains("kind") && j.at("kind").get<std::string>() != want)
        throw ConfigError(std::string("config kind mismatch: expected '") + want + "'");
}

// Shortest round-trip decimal form; keeps CSV output byte-stable.
std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

// Harmful-first ordering: ascending score, ties toward the lower index.
std::vector<int> harmful_first(const ScoreVector& s) {
    std::vector<int> idx(s.n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (s.scores[a] != s.scores[b]) return s.scores[a] < s.scores[b];
        return a < b;
    });
    return idx;
}

SubsetMask drop_prefix(int n, const std::vector<int>& ranking, int count) {
    std::vector<char> dropped(n, 0);
    for (int i = 0; i < count; ++i) dropped[ranking[i]] = 1;
    std::vector<int> keep;
    keep.reserve(n - count);
    for (int i = 0; i < n; ++i)
        if (!dropped[i]) keep.push_back(i);
    return SubsetMask(n, std::move(keep));
}

}  // namespace

void to_json(json& j, const LogisticTrainConfig& cfg) {
    j = json{{"learning_rate", cfg.learning_rate}, {"epochs", cfg.epochs}, {"l2", cfg.l2}, {"seed", cfg.seed}};
}

void from_json(const json& j, LogisticTrainConfig& cfg) {
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.l2 = j.value("l2", cfg.l2);
    cfg.seed = j.value("seed", cfg.seed);
}

void to_json(json& j, const TrainConfig& cfg) {
    j = json{{"epochs", cfg.epochs},
             {"batch_size", cfg.batch_size},
             {"learning_rate", cfg.learning_rate},
             {"beta1", cfg.beta1},
             {"beta2", cfg.beta2},
             {"adam_epsilon", cfg.adam_epsilon}};
}

void from_json(const json& j, TrainConfig& cfg) {
    cfg.epochs = j.value("epochs", cfg.epochs);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
    cfg.beta1 = j.value("beta1", cfg.beta1);
    cfg.beta2 = j.value("beta2", cfg.beta2);
    cfg.adam_epsilon = j.value("adam_epsilon", cfg.adam_epsilon);
}

std::vector<double> inspection_grid() {
    std::vector<double> g(21);
    for (int i = 0; i <= 20; ++i) g[i] = i / 20.0;
    return g;
}

DetectionCurve DetectionCurve::make(std::string method, std::vector<double> inspected,
                                    std::vector<double> detected) {
    if (inspected.size() != detected.size() || inspected.empty())
        throw Error("detection curve: coordinate arrays disagree");
    if (inspected.front() != 0.0 || detected.front() != 0.0)
        throw Error("detection curve: must start at (0,0)");
    if (inspected.back() != 1.0 || detected.back() != 1.0)
        throw Error("detection curve: must end at (1,1)");
    for (std::size_t i = 0; i < inspected.size(); ++i) {
        if (inspected[i] < 0.0 || inspected[i] > 1.0 || detected[i] < 0.0 || detected[i] > 1.0)
            throw Error("detection curve: coordinate outside [0,1]");
        if (i > 0 && (inspected[i] < inspected[i - 1] || detected[i] < detected[i - 1]))
            throw Error("detection curve: coordinates must be non-decreasing");
    }
    DetectionCurve c;
    c.method = std::move(method);
    c.auc = 0.0;
    for (std::size_t i = 1; i < inspected.size(); ++i)
        c.auc += 0.5 * (detected[i] + detected[i - 1]) * (inspected[i] - inspected[i - 1]);
    c.inspected = std::move(inspected);
    c.detected = std::move(detected);
    return c;
}

void to_json(json& j, const DetectionConfig& cfg) {
    j = json{{"kind", "detection"},
             {"n", cfg.n},
             {"d", cfg.d},
             {"corruption", cfg.corruption},
             {"fraction", cfg.fraction},
             {"sigma", cfg.sigma},
             {"validation_size", cfg.validation_size},
             {"methods", cfg.methods},
             {"seeds", cfg.seeds},
             {"budget", cfg.budget},
             {"epsilon", cfg.epsilon},
             {"width", cfg.width},
             {"train", cfg.train},
             {"proxy", cfg.proxy},
             {"knn_k", cfg.knn_k},
             {"tmc_tolerance", cfg.tmc_tolerance}};
}

void from_json(const json& j, DetectionConfig& cfg) {
    check_kind(j, "detection");
    cfg.n = j.value("n", cfg.n);
    cfg.d = j.value("d", cfg.d);
    cfg.corruption = j.value("corruption", cfg.corruption);
    cfg.fraction = j.value("fraction", cfg.fraction);
    cfg.sigma = j.value("sigma", cfg.sigma);
    cfg.validation_size = j.value("validation_size", cfg.validation_size);
    cfg.methods = j.value("methods", cfg.methods);
    cfg.seeds = j.value("seeds", cfg.seeds);
    cfg.budget = j.value("budget", cfg.budget);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.width = j.value("width", cfg.width);
    if (j.contains("train")) j.at("train").get_to(cfg.train);
    if (j.contains("proxy")) j.at("proxy").get_to(cfg.proxy);
    cfg.knn_k = j.value("knn_k", cfg.knn_k);
    cfg.tmc_tolerance = j.value("tmc_tolerance", cfg.tmc_tolerance);
}

namespace {

const std::unordered_set<std::string>& detection_methods() {
    static const std::unordered_set<std::string> known{
        "datasifter", "random", "loo", "knn-sv", "perm-sv", "tmc-sv", "exact-shapley", "least-core"};
    return known;
}

std::vector<int> detection_ranking(const std::string& method, const CachingOracle& cache,
                                   const Dataset& corrupted, const Dataset& validation,
                                   const DetectionConfig& cfg, std::uint64_t method_seed) {
    const int n = corrupted.size();
    if (method == "random") return harmful_first(random_scores(n, method_seed));
    if (method == "datasifter") {
        SifterConfig sc;
        sc.num_samples = cfg.budget;
        sc.width = cfg.width;
        sc.train = cfg.train;
        sc.epsilon = cfg.epsilon;
        return datasifter_rank(cache, corrupted, Direction::minimize, sc, method_seed).selection.order;
    }
    if (method == "loo") return harmful_first(loo(cache));
    if (method == "knn-sv") return harmful_first(knn_shapley(corrupted, validation, cfg.knn_k));
    const int perms = std::max(1, cfg.budget / std::max(1, n));
    if (method == "perm-sv") return harmful_first(perm_sampling_shapley(cache, perms, method_seed));
    if (method == "tmc-sv") return harmful_first(tmc_shapley(cache, perms, cfg.tmc_tolerance, method_seed));
    if (method == "exact-shapley") return harmful_first(exact_shapley(cache));
    if (method == "least-core") return harmful_first(least_core_scores(cache));
    throw ConfigError("unknown detection method '" + method + "'");
}

DetectionSeries sweep_ranking(const std::string& method, std::uint64_t seed, const std::vector<int>& ranking,
                              const CorruptionLog& log, const CachingOracle& cache) {
    const int n = static_cast<int>(ranking.size());
    std::vector<char> bad(n, 0);
    for (int i : log.indices) bad[i] = 1;
    const int total_bad = static_cast<int>(log.indices.size());

    DetectionSeries series;
    series.seed = seed;
    auto grid = inspection_grid();
    std::vector<double> detected(grid.size());
    series.accuracy.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const int count = (static_cast<int>(g) * n + 10) / 20;  // round(n*g/20) in integers
        int found = 0;
        for (int i = 0; i < count; ++i) found += bad[ranking[i]];
        detected[g] = static_cast<double>(found) / static_cast<double>(total_bad);
        series.accuracy[g] = cache.eval(drop_prefix(n, ranking, count));
    }
    series.curve = DetectionCurve::make(method, std::move(grid), std::move(detected));
    return series;
}

}  // namespace

DetectionResult run_detection_experiment(const DetectionConfig& cfg) {
    if (cfg.n < 2) throw ConfigError("detection: need n >= 2");
    if (cfg.seeds.empty()) throw ConfigError("detection: need at least one seed");
    if (cfg.budget < 1) throw ConfigError("detection: need budget >= 1");
    if (cfg.corruption != "label_flip" && cfg.corruption != "feature_noise")
        throw ConfigError("detection: corruption must be label_flip or feature_noise");

    DetectionResult out;
    out.config = cfg;
    std::vector<std::string> runnable;
    for (const auto& m : cfg.methods) {
        if (!detection_methods().count(m)) {
            out.skipped.push_back({m, "unknown_method"});
        } else if ((m == "exact-shapley" || m == "least-core") && cfg.n > 15) {
            out.skipped.push_back({m, "capacity_exceeded"});
        } else {
            runnable.push_back(m);
        }
    }
    for (const auto& m : runnable) out.curves.emplace_back(m, std::vector<DetectionSeries>{});

    for (std::uint64_t seed : cfg.seeds) {
        const Dataset clean = gen_synthetic_gaussian(cfg.n, cfg.d, derive_seed(seed, 101));
        auto [corrupted, log] = cfg.corruption == "label_flip"
                                    ? flip_labels(clean, cfg.fraction, derive_seed(seed, 102))
                                    : add_feature_noise(clean, cfg.fraction, cfg.sigma, derive_seed(seed, 102));
        const Dataset validation = gen_synthetic_gaussian(cfg.validation_size, cfg.d, derive_seed(seed, 103));
        ProxyUtilityOracle oracle(corrupted, validation, ProxyKind::logistic, ProxyMetric::accuracy, cfg.proxy);
        CachingOracle cache(oracle);

        for (std::size_t mi = 0; mi < runnable.size(); ++mi) {
            const auto ranking = detection_ranking(runnable[mi], cache, corrupted, validation, cfg,
                                                   derive_seed(seed, 1000 + mi));
            out.curves[mi].second.push_back(sweep_ranking(runnable[mi], seed, ranking, log, cache));
        }
    }
    return out;
}

std::vector<MethodAggregate> aggregate_detection(const DetectionResult& result) {
    std::vector<MethodAggregate> out;
    const std::size_t grid_size = inspection_grid().size();
    for (const auto& [method, series] : result.curves) {
        MethodAggregate agg;
        agg.method = method;
        std::vector<double> aucs;
        for (const auto& s : series) aucs.push_back(s.curve.auc);
        agg.mean_auc = mean_of(aucs);
        agg.std_auc = sample_std(aucs, agg.mean_auc);
        for (std::size_t g = 0; g < grid_size; ++g) {
            std::vector<double> det, acc;
            for (const auto& s : series) {
                det.push_back(s.curve.detected[g]);
                acc.push_back(s.accuracy[g]);
            }
            agg.mean_detected.push_back(mean_of(det));
            agg.std_detected.push_back(sample_std(det, agg.mean_detected.back()));
            agg.mean_accuracy.push_back(mean_of(acc));
            agg.std_accuracy.push_back(sample_std(acc, agg.mean_accuracy.back()));
        }
        out.push_back(std::move(agg));
    }
    return out;
}

void emit_detection_results(const std::string& out_dir, const DetectionResult& result) {
    std::filesystem::create_directories(out_dir);
    const auto grid = inspection_grid();

    std::ostringstream csv;
    csv << "method,seed,fraction_inspected,fraction_detected,accuracy\n";
    for (const auto& [method, series] : result.curves) {
        for (const auto& s : series) {
            for (std::size_t g = 0; g < grid.size(); ++g) {
                csv << method << ',' << s.seed << ',' << fmt(grid[g]) << ',' << fmt(s.curve.detected[g])
                    << ',' << fmt(s.accuracy[g]) << '\n';
            }
        }
    }
    write_text_atomic(out_dir + "/curves.csv", csv.str());

    json summary;
    summary["grid"] = grid;
    summary["methods"] = json::array();
    for (const auto& agg : aggregate_detection(result)) {
        summary["methods"].push_back(json{{"method", agg.method},
                                          {"mean_auc", agg.mean_auc},
                                          {"std_auc", agg.std_auc},
                                          {"mean_detected", agg.mean_detected},
                                          {"std_detected", agg.std_detected},
                                          {"mean_accuracy", agg.mean_accuracy},
                                          {"std_accuracy", agg.std_accuracy}});
    }
    summary["skipped"] = json::array();
    for (const auto& s : result.skipped)
        summary["skipped"].push_back(json{{"method", s.method}, {"reason", s.reason}});
    write_json_file(out_dir + "/summary.json", summary);
    write_json_file(out_dir + "/config.json", json(result.config));
}

// ---- redundancy demo ----

void to_json(json& j, const RedundancyConfig& cfg) {
    j = json{{"kind", "redundancy"},
             {"max_k", cfg.max_k},
             {"methods", cfg.methods},
             {"seeds", cfg.seeds},
             {"validation_per_class", cfg.validation_per_class},
             {"budget", cfg.budget},
             {"epsilon", cfg.epsilon},
             {"width", cfg.width},
             {"train", cfg.train},
             {"proxy", cfg.proxy},
             {"knn_k", cfg.knn_k}};
}

void from_json(const json& j, RedundancyConfig& cfg) {
    check_kind(j, "redundancy");
    cfg.max_k = j.value("max_k", cfg.max_k);
    cfg.methods = j.value("methods", cfg.methods);
    cfg.seeds = j.value("seeds", cfg.seeds);
    cfg.validation_per_class = j.value("validation_per_class", cfg.validation_per_class);
    cfg.budget = j.value("budget", cfg.budget);
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.width = j.value("width", cfg.width);
    if (j.contains("train")) j.at("train").get_to(cfg.train);
    if (j.contains("proxy")) j.at("proxy").get_to(cfg.proxy);
    cfg.knn_k = j.value("knn_k", cfg.knn_k);
}

Dataset balanced_validation_2d(int per_class, std::uint64_t seed) {
    if (per_class < 1) throw ConfigError("balanced_validation_2d: need per_class >= 1");
    auto rng = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Dataset out;
    out.num_classes = 2;
    int want[2] = {per_class, per_class};
    while (want[0] > 0 || want[1] > 0) {
        const double x = 0.1 + gauss(rng);
        const double y = -0.1 + gauss(rng);
        // Probe only the far off-boundary region: a constant predictor then
        // scores exactly the class balance, and any two-class training set
        // separates every probe, so utilities do not reward one particular
        // training point's boundary placement.
        if (std::abs(x + y) <= 3.0) continue;
        const int label = x + y > 0.0 ? 1 : 0;
        if (want[label] == 0) continue;
        --want[label];
        DataPoint p;
        p.id = static_cast<int>(out.points.size());
        p.features = {x, y};
        p.label = label;
        out.points.push_back(std::move(p));
    }
    return out;
}

namespace {

ScoreVector redundancy_scores(const std::string& method, const CachingOracle& cache, const Dataset& pool,
                              const Dataset& validation, const RedundancyConfig& cfg,
                              std::uint64_t method_seed) {
    const int n = pool.size();
    if (method == "exact-shapley") return exact_shapley(cache);
    if (method == "loo") return loo(cache);
    if (method == "least-core") return least_core_scores(cache);
    if (method == "knn-sv") return knn_shapley(pool, validation, cfg.knn_k);
    if (method == "random") return random_scores(n, method_seed);
    const int perms = std::max(1, cfg.budget / std::max(1, n));
    if (method == "perm-sv") return perm_sampling_shapley(cache, perms, method_seed);
    if (method == "tmc-sv") return tmc_shapley(cache, perms, 0.01, method_seed);
    throw ConfigError("unknown redundancy method '" + method + "'");
}

}  // namespace

RedundancyResult run_redundancy_demo(const RedundancyConfig& cfg) {
    if (cfg.seeds.empty()) throw ConfigError("redundancy: need at least one seed");
    if (cfg.max_k < 1 || cfg.max_k > 14) throw ConfigError("redundancy: need 1 <= max_k <= 14");

    RedundancyResult out;
    out.config = cfg;
    for (std::uint64_t seed : cfg.seeds) {
        const Dataset pool = gen_redundant_2d(derive_seed(seed, 11));
        const Dataset validation = balanced_validation_2d(cfg.validation_per_class, derive_seed(seed, 12));
        ProxyUtilityOracle oracle(pool, validation, ProxyKind::logistic, ProxyMetric::accuracy, cfg.proxy);
        CachingOracle cache(oracle);
        const int n = pool.size();

        RedundancySeedResult sr;
        sr.seed = seed;
        sr.majority_accuracy = cache.eval(SubsetMask(n));

        for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            const auto scores =
                redundancy_scores(cfg.methods[mi], cache, pool, validation, cfg, derive_seed(seed, 500 + mi));
            RedundancyRow row;
            row.method = cfg.methods[mi];
            for (int k = 1; k <= cfg.max_k; ++k) {
                row.selection.push_back(linear_select(scores, k));
                row.utility.push_back(cache.eval(row.selection.back()));
            }
            sr.rows.push_back(std::move(row));
        }

        const auto value_fn = [&](const SubsetMask& m) { return cache.eval(m); };
        RedundancyRow opt;
        opt.method = "optimal";
        for (int k = 1; k <= cfg.max_k; ++k) {
            opt.selection.push_back(exhaustive_optimal(value_fn, n, k, Direction::maximize).mask);
            opt.utility.push_back(cache.eval(opt.selection.back()));
        }
        sr.rows.push_back(std::move(opt));

        // One learned utility model per seed; greedy re-runs per budget.
        const auto samples = sample_utilities(cache, cfg.budget, SamplePolicy::uniform_size_then_uniform_subset,
                                              0, derive_seed(seed, 0xA5));
        SetRegressor model(pool.feature_dim(), pool.num_classes, cfg.width, derive_seed(seed, 0xB6));
        TrainConfig tc = cfg.train;
        tc.shuffle_seed = derive_seed(seed, 0xC7);
        train(model, pool, samples, tc);
        RegressorEvaluator evaluator(model, pool);
        const auto model_fn = [&](const SubsetMask& m) { return evaluator.value(m); };
        RedundancyRow ds;
        ds.method = "datasifter";
        for (int k = 1; k <= cfg.max_k; ++k) {
            ds.selection.push_back(
                stochastic_greedy(model_fn, n, k, cfg.epsilon, Direction::maximize, derive_seed(seed, 0xD800 + k))
                    .mask);
            ds.utility.push_back(cache.eval(ds.selection.back()));
        }
        sr.rows.push_back(std::move(ds));

        out.per_seed.push_back(std::move(sr));
    }
    return out;
}

void emit_redundancy_results(const std::string& out_dir, const RedundancyResult& result) {
    std::filesystem::create_directories(out_dir);
    const std::size_t num_rows = result.per_seed.empty() ? 0 : result.per_seed.front().rows.size();

    std::ostringstream csv;
    csv << "method,seed,k,utility\n";
    for (std::size_t r = 0; r < num_rows; ++r) {
        for (const auto& sr : result.per_seed) {
            const auto& row = sr.rows[r];
            for (int k = 1; k <= result.config.max_k; ++k)
                csv << row.method << ',' << sr.seed << ',' << k << ',' << fmt(row.utility[k - 1]) << '\n';
        }
    }
    write_text_atomic(out_dir + "/table.csv", csv.str());

    json summary;
    summary["max_k"] = result.config.max_k;
    summary["majority_accuracy"] = json::array();
    for (const auto& sr : result.per_seed) summary["majority_accuracy"].push_back(sr.majority_accuracy);
    summary["methods"] = json::array();
    for (std::size_t r = 0; r < num_rows; ++r) {
        json m;
        m["method"] = result.per_seed.front().rows[r].method;
        std::vector<double> means, stds;
        for (int k = 1; k <= result.config.max_k; ++k) {
            std::vector<double> xs;
            for (const auto& sr : result.per_seed) xs.push_back(sr.rows[r].utility[k - 1]);
            means.push_back(mean_of(xs));
            stds.push_back(sample_std(xs, means.back()));
        }
        m["mean_utility"] = means;
        m["std_utility"] = stds;
        summary["methods"].push_back(std::move(m));
    }
    write_json_file(out_dir + "/summary.json", summary);
    write_json_file(out_dir + "/config.json", json(result.config));
}

// ---- utility-fit report ----

void to_json(json& j, const FitConfig& cfg) {
    j = json{{"kind", "fit"},
             {"n", cfg.n},
             {"d", cfg.d},
             {"num_samples", cfg.num_samples},
             {"held_out", cfg.held_out},
             {"validation_size", cfg.validation_size},
             {"seed", cfg.seed},
             {"width", cfg.width},
             {"train", cfg.train},
             {"proxy", cfg.proxy}};
}

void from_json(const json& j, FitConfig& cfg) {
    check_kind(j, "fit");
    cfg.n = j.value("n", cfg.n);
    cfg.d = j.value("d", cfg.d);
    cfg.num_samples = j.value("num_samples", cfg.num_samples);
    cfg.held_out = j.value("held_out", cfg.held_out);
    cfg.validation_size = j.value("validation_size", cfg.validation_size);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.width = j.value("width", cfg.width);
    if (j.contains("train")) j.at("train").get_to(cfg.train);
    if (j.contains("proxy")) j.at("proxy").get_to(cfg.proxy);
}

FitReport run_utility_fit_report(const FitConfig& cfg) {
    if (cfg.n < 2 || cfg.n > 62) throw ConfigError("fit report: need 2 <= n <= 62");
    if (cfg.num_samples < 1 || cfg.held_out < 1)
        throw ConfigError("fit report: need num_samples >= 1 and held_out >= 1");

    const Dataset data = gen_synthetic_gaussian(cfg.n, cfg.d, derive_seed(cfg.seed, 21));
    const Dataset validation = gen_synthetic_gaussian(cfg.validation_size, cfg.d, derive_seed(cfg.seed, 22));
    ProxyUtilityOracle oracle(data, validation, ProxyKind::logistic, ProxyMetric::accuracy, cfg.proxy);
    CachingOracle cache(oracle);

    FitReport rep;
    rep.config = cfg;
    const auto samples = sample_utilities(cache, cfg.num_samples, SamplePolicy::uniform_size_then_uniform_subset,
                                          0, derive_seed(cfg.seed, 23));

    std::unordered_set<std::uint64_t> seen;
    for (const auto& s : samples) seen.insert(s.mask.bits());
    std::vector<SubsetMask> held;
    auto rng = make_engine(derive_seed(cfg.seed, 24));
    long attempts = 0;
    const long attempt_cap = 1000L * cfg.held_out + 1000L;
    while (static_cast<int>(held.size()) < cfg.held_out) {
        if (++attempts > attempt_cap)
            throw ConfigError("fit report: cannot draw enough held-out masks distinct from training");
        auto m = sample_subset(cfg.n, SamplePolicy::uniform_size_then_uniform_subset, 0, rng);
        if (seen.insert(m.bits()).second) held.push_back(std::move(m));
    }

    SetRegressor model(data.feature_dim(), data.num_classes, cfg.width, derive_seed(cfg.seed, 25));
    TrainConfig tc = cfg.train;
    tc.shuffle_seed = derive_seed(cfg.seed, 26);
    rep.loss_trace = train(model, data, samples, tc).loss_trace;

    for (const auto& m : held) {
        rep.true_utility.push_back(cache.eval(m));
        rep.predicted_utility.push_back(model.predict(data, m));
    }
    rep.pearson = pearson(rep.true_utility, rep.predicted_utility);
    rep.spearman = spearman(rep.true_utility, rep.predicted_utility);

    std::vector<double> train_true, train_pred;
    for (const auto& s : samples) {
        train_true.push_back(s.utility);
        train_pred.push_back(model.predict(data, s.mask));
    }
    rep.train_pearson = pearson(train_true, train_pred);
    return rep;
}

void emit_fit_report(const std::string& out_dir, const FitReport& report) {
    std::filesystem::create_directories(out_dir);

    std::ostringstream csv;
    csv << "true_utility,predicted_utility\n";
    for (std::size_t i = 0; i < report.true_utility.size(); ++i)
        csv << fmt(report.true_utility[i]) << ',' << fmt(report.predicted_utility[i]) << '\n';
    write_text_atomic(out_dir + "/scatter.csv", csv.str());

    write_json_file(out_dir + "/summary.json", json{{"pearson", report.pearson},
                                                    {"spearman", report.spearman},
                                                    {"train_pearson", report.train_pearson},
                                                    {"pairs", report.true_utility.size()},
                                                    {"loss_trace", report.loss_trace}});
    write_json_file(out_dir + "/config.json", json(report.config));
}

}  // namespace sift
