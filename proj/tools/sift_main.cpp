// Command-line front end. Every command reads an optional JSON config
// (--config) plus flag overrides (flags win), executes, and persists the
// fully resolved config next to its outputs so any run can be reproduced
// byte for byte. Exit codes: 0 success, 1 operational error, 2 failed
// verification assertions.
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sift/dataset.hpp"
#include "sift/domination.hpp"
#include "sift/errors.hpp"
#include "sift/experiment.hpp"
#include "sift/io.hpp"
#include "sift/least_core.hpp"
#include "sift/learning.hpp"
#include "sift/rng.hpp"
#include "sift/selection.hpp"
#include "sift/utility.hpp"
#include "sift/valuation.hpp"

namespace {

using nlohmann::json;

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    const json j = sift::read_json_file(path);
    if (!j.is_object()) throw sift::ConfigError("config must be a JSON object: " + path);
    return j;
}

// Flag wins; otherwise the config key, if present, replaces the default.
template <typename T>
void merge(const json& cfg, const CLI::App& cmd, const std::string& flag, const char* key, T& value) {
    if (cmd.count(flag) == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

void merge_seed(const json& cfg, const CLI::App& cmd, std::optional<std::uint64_t>& seed) {
    if (cmd.count("--seed") == 0 && cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
}

void require_seed(const std::optional<std::uint64_t>& seed, const std::string& what) {
    if (!seed) throw sift::ConfigError(what + " is stochastic: pass --seed or a \"seed\" config key");
}

// Oracle inputs shared by sample/value/select/dominate: either a tabular
// game file or a dataset + validation pair scored by a proxy model.
struct OracleSpec {
    std::string game;
    std::string data;
    std::string validation;
    std::string proxy = "logistic";
    std::string metric = "accuracy";
    int knn_k = 5;
    sift::LogisticTrainConfig proxy_train;

    std::optional<sift::TabularUtility> tabular;
    std::optional<sift::ProxyUtilityOracle> proxied;
    sift::Dataset train_data;
    sift::Dataset val_data;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--game", game, "tabular utility JSON file");
        cmd->add_option("--data", data, "training dataset (JSON lines)");
        cmd->add_option("--validation", validation, "validation dataset (JSON lines)");
        cmd->add_option("--proxy", proxy, "proxy model: logistic|knn");
        cmd->add_option("--metric", metric, "utility metric: accuracy|group");
        cmd->add_option("--knn-k", knn_k, "neighbor count for the knn proxy");
    }

    void merge_config(const json& cfg, const CLI::App& cmd) {
        merge(cfg, cmd, "--game", "game", game);
        merge(cfg, cmd, "--data", "data", data);
        merge(cfg, cmd, "--validation", "validation", validation);
        merge(cfg, cmd, "--proxy", "proxy", proxy);
        merge(cfg, cmd, "--metric", "metric", metric);
        merge(cfg, cmd, "--knn-k", "knn_k", knn_k);
        if (cfg.contains("proxy_train")) cfg.at("proxy_train").get_to(proxy_train);
    }

    const sift::UtilityOracle& build() {
        if (!game.empty()) {
            if (!data.empty()) throw sift::ConfigError("pass either --game or --data, not both");
            tabular = sift::read_tabular_utility(game);
            return *tabular;
        }
        if (data.empty() || validation.empty())
            throw sift::ConfigError("provide --game, or --data together with --validation");
        const auto kind = [&] {
            if (proxy == "logistic") return sift::ProxyKind::logistic;
            if (proxy == "knn") return sift::ProxyKind::knn;
            throw sift::ConfigError("unknown proxy '" + proxy + "' (logistic|knn)");
        }();
        const auto met = [&] {
            if (metric == "accuracy") return sift::ProxyMetric::accuracy;
            if (metric == "group") return sift::ProxyMetric::group_averaged_accuracy;
            throw sift::ConfigError("unknown metric '" + metric + "' (accuracy|group)");
        }();
        train_data = sift::read_dataset(data);
        val_data = sift::read_dataset(validation);
        proxied.emplace(train_data, val_data, kind, met, proxy_train, knn_k);
        return *proxied;
    }

    json resolved() const {
        json pt;
        sift::to_json(pt, proxy_train);
        return json{{"game", game},        {"data", data},   {"validation", validation},
                    {"proxy", proxy},      {"metric", metric}, {"knn_k", knn_k},
                    {"proxy_train", pt}};
    }
};

void write_resolved(const std::string& out_path, json resolved) {
    sift::write_json_file(out_path + ".config.json", std::move(resolved));
}

// ---- sample ----

int run_sample(const CLI::App& cmd, const std::string& config_path, OracleSpec& oracle_spec,
               const std::string& out, int num_samples, std::string policy, int fixed_k,
               std::optional<std::uint64_t> seed) {
    const json cfg = load_config(config_path);
    oracle_spec.merge_config(cfg, cmd);
    merge(cfg, cmd, "--num-samples", "num_samples", num_samples);
    merge(cfg, cmd, "--policy", "policy", policy);
    merge(cfg, cmd, "--fixed-k", "fixed_k", fixed_k);
    merge_seed(cfg, cmd, seed);
    require_seed(seed, "sample");
    const auto pol = [&] {
        if (policy == "uniform") return sift::SamplePolicy::uniform_size_then_uniform_subset;
        if (policy == "fixed") return sift::SamplePolicy::fixed_size;
        throw sift::ConfigError("unknown policy '" + policy + "' (uniform|fixed)");
    }();

    const auto& oracle = oracle_spec.build();
    const auto samples = sift::sample_utilities(oracle, num_samples, pol, fixed_k, *seed, out);

    json resolved = oracle_spec.resolved();
    resolved["command"] = "sample";
    resolved["num_samples"] = num_samples;
    resolved["policy"] = policy;
    resolved["fixed_k"] = fixed_k;
    resolved["seed"] = *seed;
    write_resolved(out, std::move(resolved));
    std::cout << "wrote " << samples.size() << " samples to " << out << "\n";
    return 0;
}

// ---- value ----

int run_value(const CLI::App& cmd, const std::string& config_path, OracleSpec& oracle_spec,
              const std::string& out, std::string method, int permutations, double tolerance, int n_override,
              std::optional<std::uint64_t> seed) {
    const json cfg = load_config(config_path);
    oracle_spec.merge_config(cfg, cmd);
    merge(cfg, cmd, "--method", "method", method);
    merge(cfg, cmd, "--permutations", "permutations", permutations);
    merge(cfg, cmd, "--tolerance", "tolerance", tolerance);
    merge(cfg, cmd, "--n", "n", n_override);
    merge_seed(cfg, cmd, seed);
    if (method.empty()) throw sift::ConfigError("value: --method is required");

    sift::ScoreVector scores;
    if (method == "random") {
        require_seed(seed, "value --method random");
        int n = n_override;
        if (n == 0) n = oracle_spec.build().universe_size();
        scores = sift::random_scores(n, *seed);
    } else if (method == "knn-sv") {
        if (oracle_spec.data.empty() || oracle_spec.validation.empty())
            throw sift::ConfigError("knn-sv needs --data and --validation");
        scores = sift::knn_shapley(sift::read_dataset(oracle_spec.data),
                                   sift::read_dataset(oracle_spec.validation), oracle_spec.knn_k);
    } else {
        const auto& oracle = oracle_spec.build();
        sift::CachingOracle cache(oracle);
        if (method == "exact-shapley") {
            scores = sift::exact_shapley(cache);
        } else if (method == "loo") {
            scores = sift::loo(cache);
        } else if (method == "least-core") {
            scores = sift::least_core_scores(cache);
        } else if (method == "perm-sv") {
            require_seed(seed, "value --method perm-sv");
            scores = sift::perm_sampling_shapley(cache, permutations, *seed);
        } else if (method == "tmc-sv") {
            require_seed(seed, "value --method tmc-sv");
            scores = sift::tmc_shapley(cache, permutations, tolerance, *seed);
        } else {
            throw sift::ConfigError(
                "unknown method '" + method +
                "' (exact-shapley|perm-sv|tmc-sv|knn-sv|loo|least-core|random)");
        }
    }
    sift::write_scores(out, scores);

    json resolved = oracle_spec.resolved();
    resolved["command"] = "value";
    resolved["method"] = method;
    resolved["permutations"] = permutations;
    resolved["tolerance"] = tolerance;
    resolved["n"] = n_override;
    if (seed) resolved["seed"] = *seed;
    write_resolved(out, std::move(resolved));
    std::cout << "wrote " << method << " scores to " << out << "\n";
    return 0;
}

// ---- select ----

int run_select(const CLI::App& cmd, const std::string& config_path, const std::string& out,
               std::string oracle_path, std::string model_path, std::string data_path, int k,
               double epsilon, std::string direction, std::optional<std::uint64_t> seed) {
    const json cfg = load_config(config_path);
    merge(cfg, cmd, "--oracle", "oracle", oracle_path);
    merge(cfg, cmd, "--model", "model", model_path);
    merge(cfg, cmd, "--data", "data", data_path);
    merge(cfg, cmd, "--k", "k", k);
    merge(cfg, cmd, "--epsilon", "epsilon", epsilon);
    merge(cfg, cmd, "--direction", "direction", direction);
    merge_seed(cfg, cmd, seed);
    require_seed(seed, "select");
    if (k < 1) throw sift::ConfigError("select: --k must be >= 1");
    const auto dir = [&] {
        if (direction == "max") return sift::Direction::maximize;
        if (direction == "min") return sift::Direction::minimize;
        throw sift::ConfigError("unknown direction '" + direction + "' (max|min)");
    }();

    sift::SelectionResult result;
    if (!oracle_path.empty()) {
        if (!model_path.empty()) throw sift::ConfigError("pass either --oracle or --model, not both");
        const auto game = sift::read_tabular_utility(oracle_path);
        result = sift::stochastic_greedy([&](const sift::SubsetMask& m) { return game.eval(m); },
                                         game.universe_size(), k, epsilon, dir, *seed);
    } else if (!model_path.empty()) {
        if (data_path.empty()) throw sift::ConfigError("select --model also needs --data for embeddings");
        const auto model = sift::read_regressor(model_path);
        const auto data = sift::read_dataset(data_path);
        if (model.feature_dim != data.feature_dim() || model.num_classes < data.num_classes)
            throw sift::ConfigError("select: checkpoint embedding shape does not fit the dataset");
        const sift::RegressorEvaluator evaluator(model, data);
        result = sift::stochastic_greedy([&](const sift::SubsetMask& m) { return evaluator.value(m); },
                                         data.size(), k, epsilon, dir, *seed);
    } else {
        throw sift::ConfigError("select needs --oracle or --model");
    }
    sift::write_selection(out, result);

    write_resolved(out, json{{"command", "select"},
                             {"oracle", oracle_path},
                             {"model", model_path},
                             {"data", data_path},
                             {"k", k},
                             {"epsilon", epsilon},
                             {"direction", direction},
                             {"seed", *seed}});
    std::cout << "selected " << result.mask.size() << " points, wrote " << out << "\n";
    return 0;
}

// ---- train-utility ----

int run_train_utility(const CLI::App& cmd, const std::string& config_path, const std::string& out,
                      std::string data_path, std::string samples_path, int width,
                      sift::TrainConfig tc, std::optional<std::uint64_t> seed) {
    const json cfg = load_config(config_path);
    merge(cfg, cmd, "--data", "data", data_path);
    merge(cfg, cmd, "--samples", "samples", samples_path);
    merge(cfg, cmd, "--width", "width", width);
    merge(cfg, cmd, "--epochs", "epochs", tc.epochs);
    merge(cfg, cmd, "--batch-size", "batch_size", tc.batch_size);
    merge(cfg, cmd, "--lr", "learning_rate", tc.learning_rate);
    merge_seed(cfg, cmd, seed);
    require_seed(seed, "train-utility");
    if (data_path.empty() || samples_path.empty())
        throw sift::ConfigError("train-utility needs --data and --samples");

    const auto data = sift::read_dataset(data_path);
    const auto samples = sift::maybe_read_samples(samples_path, data.size());
    if (samples.empty()) throw sift::IoError("no samples found in " + samples_path);

    sift::SetRegressor model(data.feature_dim(), data.num_classes, width, sift::derive_seed(*seed, 1));
    tc.shuffle_seed = sift::derive_seed(*seed, 2);
    const auto trained = sift::train(model, data, samples, tc);
    sift::write_regressor(out, model);

    write_resolved(out, json{{"command", "train-utility"},
                             {"data", data_path},
                             {"samples", samples_path},
                             {"width", width},
                             {"epochs", tc.epochs},
                             {"batch_size", tc.batch_size},
                             {"learning_rate", tc.learning_rate},
                             {"seed", *seed}});
    std::cout << "trained on " << samples.size() << " samples, final epoch MSE "
              << (trained.loss_trace.empty() ? 0.0 : trained.loss_trace.back()) << ", wrote " << out
              << "\n";
    return 0;
}

// ---- dominate ----

int run_dominate(const CLI::App& cmd, const std::string& config_path, const std::string& out,
                 std::string game_path, std::string scores_path, std::vector<int> members, int k) {
    const json cfg = load_config(config_path);
    merge(cfg, cmd, "--game", "game", game_path);
    merge(cfg, cmd, "--scores", "scores", scores_path);
    merge(cfg, cmd, "--members", "members", members);
    merge(cfg, cmd, "--k", "k", k);
    if (game_path.empty()) throw sift::ConfigError("dominate needs --game");
    if (k < 0) throw sift::ConfigError("dominate: --k must be >= 0");

    const auto game = sift::read_tabular_utility(game_path);
    sift::DominationReport report;
    if (!scores_path.empty()) {
        report = sift::domination_count(game, sift::read_scores(scores_path), k);
    } else if (!members.empty() || k == 0) {
        report = sift::domination_count(game, sift::SubsetMask(game.universe_size(), members), k);
    } else {
        throw sift::ConfigError("dominate needs --scores or --members");
    }

    sift::write_json_file(out, json{{"n", report.n},
                                    {"k", report.k},
                                    {"selected", report.selected.members()},
                                    {"dominated", report.dominated},
                                    {"total", report.total},
                                    {"selected_utility", report.selected_utility},
                                    {"is_unique_worst", report.is_unique_worst}});
    write_resolved(out, json{{"command", "dominate"},
                             {"game", game_path},
                             {"scores", scores_path},
                             {"members", members},
                             {"k", k}});
    std::cout << "selection dominates " << report.dominated << " of " << report.total << " subsets\n";
    return 0;
}

// ---- verify-theory ----

json thm1_report(std::uint64_t seed, int permutations, bool& pass) {
    const auto game = sift::build_thm1_instance();
    const sift::CachingOracle cache(game);
    const std::vector<double> expected{11.0 / 3.0, 19.0 / 6.0, 19.0 / 6.0};
    const auto shap = sift::exact_shapley(cache);
    bool values_ok = true;
    for (int i = 0; i < 3; ++i)
        if (std::abs(shap.scores[i] - expected[i]) > 1e-9) values_ok = false;

    json heuristics = json::array();
    bool none_optimal_twice = true;
    bool pick0_bound_ok = true;
    const auto evaluate = [&](const std::string& name, const sift::ScoreVector& s) {
        const auto d1 = sift::domination_count(cache, s, 1);
        const auto d2 = sift::domination_count(cache, s, 2);
        const int first_pick = sift::linear_select(s, 1).members()[0];
        const bool optimal_both = d1.dominated == d1.total && d2.dominated == d2.total;
        if (optimal_both) none_optimal_twice = false;
        if (first_pick == 0 && d2.dominated > 2) pick0_bound_ok = false;
        heuristics.push_back(json{{"method", name},
                                  {"first_pick", first_pick},
                                  {"d1", d1.dominated},
                                  {"d2", d2.dominated},
                                  {"optimal_at_both", optimal_both}});
    };
    evaluate("exact-shapley", shap);
    evaluate("loo", sift::loo(cache));
    evaluate("least-core", sift::least_core_scores(cache));
    evaluate("perm-sv", sift::perm_sampling_shapley(cache, permutations, sift::derive_seed(seed, 1)));
    evaluate("tmc-sv", sift::tmc_shapley(cache, permutations, 0.0, sift::derive_seed(seed, 2)));

    pass = values_ok && none_optimal_twice && pick0_bound_ok;
    return json{{"theorem", 1},
                {"shapley", shap.scores},
                {"expected", expected},
                {"shapley_matches", values_ok},
                {"heuristics", heuristics},
                {"no_heuristic_optimal_at_both_sizes", none_optimal_twice},
                {"pair_domination_bound_when_first_pick_is_0", pick0_bound_ok},
                {"pass", pass}};
}

json thm2_report(int n, int c, bool& pass) {
    const auto inst = sift::build_thm2_instance(n, c);
    const sift::CachingOracle cache(inst.game);
    const auto shap = sift::exact_shapley(cache);

    double spread = 0.0;
    for (int t = 0; t < c; ++t) {
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < n; ++i) {
            if (inst.type_of[i] != t) continue;
            lo = std::min(lo, shap.scores[i]);
            hi = std::max(hi, shap.scores[i]);
        }
        spread = std::max(spread, hi - lo);
    }
    const bool symmetric = spread <= 1e-9;

    const int lo_size = n / c;
    bool utilities_zero = true;
    bool bounds_ok = true;
    json per_k = json::array();
    for (int k = 1; k <= lo_size; ++k) {
        const auto selection = sift::linear_select(shap, k);
        const double util = cache.eval(selection);
        const auto dom = sift::domination_count(cache, selection, k);
        const auto bound = static_cast<std::uint64_t>(c - inst.r) * sift::binom(lo_size, k) +
                           static_cast<std::uint64_t>(inst.r) * sift::binom(lo_size + 1, k);
        if (util != 0.0) utilities_zero = false;
        if (dom.dominated > bound) bounds_ok = false;
        per_k.push_back(json{{"k", k},
                             {"selection", selection.members()},
                             {"utility", util},
                             {"dominated", dom.dominated},
                             {"bound", bound}});
    }
    pass = symmetric && utilities_zero && bounds_ok;
    return json{{"theorem", 2},
                {"n", n},
                {"c", c},
                {"r", inst.r},
                {"shapley", shap.scores},
                {"within_type_spread", spread},
                {"symmetric_within_type", symmetric},
                {"selection_utility_zero", utilities_zero},
                {"domination_bounds_hold", bounds_ok},
                {"per_k", per_k},
                {"pass", pass}};
}

json thm3_report(int n, int k, bool& pass) {
    const auto rep = sift::verify_closed_form_shapley(n, k);
    const auto game = sift::build_thm3_instance(n, k);
    const sift::CachingOracle cache(game);

    json j{{"theorem", 3},         {"n", n},
           {"k", k},               {"shapley", rep.shapley},
           {"closed_form", rep.closed_form}, {"max_abs_err", rep.max_abs_err},
           {"gap", rep.gap},       {"gap_bound", rep.gap_bound},
           {"closed_form_ok", rep.ok}};

    bool properties_ok = true;
    if (n <= 12) {
        const auto mono = sift::check_monotone(cache);
        const auto sub = sift::check_submodular(cache);
        properties_ok = mono.holds && sub.holds;
        j["monotone"] = mono.holds;
        j["submodular"] = sub.holds;
    }

    sift::ScoreVector scores;
    scores.method = "exact-shapley";
    scores.n = n;
    scores.scores = rep.shapley;
    const auto selection = sift::linear_select(scores, k);
    std::vector<int> expect_sel(k);
    for (int i = 0; i < k; ++i) expect_sel[i] = i;
    const bool selection_ok = selection.members() == expect_sel;
    const auto dom = sift::domination_count(cache, selection, k);

    j["selection"] = selection.members();
    j["selection_is_first_block"] = selection_ok;
    j["dominated"] = dom.dominated;
    j["is_unique_worst"] = dom.is_unique_worst;
    pass = rep.ok && properties_ok && selection_ok && dom.dominated == 1 && dom.is_unique_worst;
    j["pass"] = pass;
    return j;
}

int run_verify_theory(const CLI::App& cmd, const std::string& config_path, const std::string& out,
                      int theorem, int n, int k, int c, int permutations,
                      std::optional<std::uint64_t> seed) {
    const json cfg = load_config(config_path);
    merge(cfg, cmd, "--theorem", "theorem", theorem);
    merge(cfg, cmd, "--n", "n", n);
    merge(cfg, cmd, "--k", "k", k);
    merge(cfg, cmd, "--c", "c", c);
    merge(cfg, cmd, "--permutations", "permutations", permutations);
    merge_seed(cfg, cmd, seed);

    bool pass = false;
    json report;
    if (theorem == 1) {
        require_seed(seed, "verify-theory --theorem 1");
        report = thm1_report(*seed, permutations, pass);
    } else if (theorem == 2) {
        if (c < 1) throw sift::ConfigError("verify-theory --theorem 2 needs --c");
        report = thm2_report(n, c, pass);
    } else if (theorem == 3) {
        if (k < 1) throw sift::ConfigError("verify-theory --theorem 3 needs --k");
        report = thm3_report(n, k, pass);
    } else {
        throw sift::ConfigError("--theorem must be 1, 2 or 3");
    }

    if (out.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        sift::write_json_file(out, report);
        json resolved{{"command", "verify-theory"}, {"theorem", theorem}, {"n", n},
                      {"k", k},                     {"c", c},             {"permutations", permutations}};
        if (seed) resolved["seed"] = *seed;
        write_resolved(out, std::move(resolved));
        std::cout << "theorem " << theorem << (pass ? " checks passed, " : " CHECKS FAILED, ")
                  << "report at " << out << "\n";
    }
    return pass ? 0 : 2;
}

// ---- experiment / fit-report ----

int run_experiment(const CLI::App& cmd, const std::string& config_path, const std::string& out_dir,
                   std::vector<std::uint64_t> seeds, int budget, int width, double epsilon,
                   std::vector<std::string> methods) {
    const json cfg = load_config(config_path);
    const std::string kind = cfg.value("kind", std::string("detection"));
    const auto apply_overrides = [&](auto& c) {
        if (cmd.count("--seeds")) c.seeds = seeds;
        if (cmd.count("--budget")) c.budget = budget;
        if (cmd.count("--width")) c.width = width;
        if (cmd.count("--epsilon")) c.epsilon = epsilon;
        if (cmd.count("--methods")) c.methods = methods;
    };
    if (kind == "detection") {
        auto c = cfg.get<sift::DetectionConfig>();
        apply_overrides(c);
        sift::emit_detection_results(out_dir, sift::run_detection_experiment(c));
    } else if (kind == "redundancy") {
        auto c = cfg.get<sift::RedundancyConfig>();
        apply_overrides(c);
        sift::emit_redundancy_results(out_dir, sift::run_redundancy_demo(c));
    } else {
        throw sift::ConfigError("experiment kind must be detection or redundancy, got '" + kind + "'");
    }
    std::cout << "experiment results in " << out_dir << "\n";
    return 0;
}

int run_fit_report(const CLI::App& cmd, const std::string& config_path, const std::string& out_dir,
                   int n, int d, int num_samples, int held_out, int width,
                   std::optional<std::uint64_t> seed) {
    const json cfg = load_config(config_path);
    auto c = cfg.get<sift::FitConfig>();
    if (cmd.count("--n")) c.n = n;
    if (cmd.count("--d")) c.d = d;
    if (cmd.count("--num-samples")) c.num_samples = num_samples;
    if (cmd.count("--held-out")) c.held_out = held_out;
    if (cmd.count("--width")) c.width = width;
    if (cmd.count("--seed")) c.seed = *seed;
    const auto report = sift::run_utility_fit_report(c);
    sift::emit_fit_report(out_dir, report);
    std::cout << "held-out pearson " << report.pearson << ", spearman " << report.spearman
              << ", results in " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"data valuation and subset selection engine"};
    app.require_subcommand(1);

    std::string config_path, out;
    std::optional<std::uint64_t> seed;

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "draw subsets and record oracle utilities");
    OracleSpec sample_oracle;
    int sample_m = 4000, sample_fixed_k = 0;
    std::string sample_policy = "uniform";
    sample_oracle.add_flags(sample_cmd);
    sample_cmd->add_option("--config", config_path, "JSON config; flags override");
    sample_cmd->add_option("--out", out, "output JSON-lines file")->required();
    sample_cmd->add_option("--num-samples,-m", sample_m, "number of sampled subsets");
    sample_cmd->add_option("--policy", sample_policy, "uniform|fixed");
    sample_cmd->add_option("--fixed-k", sample_fixed_k, "subset size under the fixed policy");
    sample_cmd->add_option("--seed", seed, "master seed");

    // value
    auto* value_cmd = app.add_subcommand("value", "score every training point");
    OracleSpec value_oracle;
    std::string value_method;
    int value_perms = 4000, value_n = 0;
    double value_tol = 0.01;
    value_oracle.add_flags(value_cmd);
    value_cmd->add_option("--config", config_path, "JSON config; flags override");
    value_cmd->add_option("--out", out, "output scores JSON")->required();
    value_cmd->add_option("--method", value_method,
                          "exact-shapley|perm-sv|tmc-sv|knn-sv|loo|least-core|random");
    value_cmd->add_option("--permutations", value_perms, "permutation budget for perm-sv/tmc-sv");
    value_cmd->add_option("--tolerance", value_tol, "truncation tolerance for tmc-sv");
    value_cmd->add_option("--n", value_n, "universe size for --method random without an oracle");
    value_cmd->add_option("--seed", seed, "master seed");

    // select
    auto* select_cmd = app.add_subcommand("select", "pick a size-k subset by stochastic greedy");
    std::string select_oracle_path, select_model, select_data, select_dir = "max";
    int select_k = 0;
    double select_eps = 0.1;
    select_cmd->add_option("--config", config_path, "JSON config; flags override");
    select_cmd->add_option("--out", out, "output selection JSON")->required();
    select_cmd->add_option("--oracle", select_oracle_path, "tabular utility JSON to optimize directly");
    select_cmd->add_option("--model", select_model, "set-regressor checkpoint to optimize");
    select_cmd->add_option("--data", select_data, "dataset backing the checkpoint embeddings");
    select_cmd->add_option("--k", select_k, "subset size");
    select_cmd->add_option("--epsilon", select_eps, "stochastic greedy accuracy parameter");
    select_cmd->add_option("--direction", select_dir, "max|min");
    select_cmd->add_option("--seed", seed, "master seed");

    // train-utility
    auto* train_cmd = app.add_subcommand("train-utility", "fit the set regressor to sampled utilities");
    std::string train_data_path, train_samples_path;
    int train_width = 64;
    sift::TrainConfig train_tc;
    train_cmd->add_option("--config", config_path, "JSON config; flags override");
    train_cmd->add_option("--out", out, "output checkpoint JSON")->required();
    train_cmd->add_option("--data", train_data_path, "training dataset (JSON lines)");
    train_cmd->add_option("--samples", train_samples_path, "utility samples (JSON lines)");
    train_cmd->add_option("--width", train_width, "hidden width of phi and rho");
    train_cmd->add_option("--epochs", train_tc.epochs, "training epochs");
    train_cmd->add_option("--batch-size", train_tc.batch_size, "minibatch size");
    train_cmd->add_option("--lr", train_tc.learning_rate, "Adam learning rate");
    train_cmd->add_option("--seed", seed, "master seed (init and shuffle streams)");

    // dominate
    auto* dom_cmd = app.add_subcommand("dominate", "count size-k subsets a selection dominates");
    std::string dom_game, dom_scores;
    std::vector<int> dom_members;
    int dom_k = 0;
    dom_cmd->add_option("--config", config_path, "JSON config; flags override");
    dom_cmd->add_option("--out", out, "output report JSON")->required();
    dom_cmd->add_option("--game", dom_game, "tabular utility JSON");
    dom_cmd->add_option("--scores", dom_scores, "score vector JSON; top-k is the selection");
    dom_cmd->add_option("--members", dom_members, "explicit selection members")->delimiter(',');
    dom_cmd->add_option("--k", dom_k, "subset size");

    // verify-theory
    auto* verify_cmd = app.add_subcommand("verify-theory", "check the worked counterexample instances");
    int vt_theorem = 0, vt_n = 0, vt_k = 0, vt_c = 0, vt_perms = 4000;
    verify_cmd->add_option("--config", config_path, "JSON config; flags override");
    verify_cmd->add_option("--out", out, "report JSON path (default: stdout)");
    verify_cmd->add_option("--theorem", vt_theorem, "1|2|3");
    verify_cmd->add_option("--n", vt_n, "universe size (theorems 2 and 3)");
    verify_cmd->add_option("--k", vt_k, "selection size (theorem 3)");
    verify_cmd->add_option("--c", vt_c, "type count (theorem 2)");
    verify_cmd->add_option("--permutations", vt_perms, "sampling budget for the estimator heuristics");
    verify_cmd->add_option("--seed", seed, "master seed (theorem 1 estimators)");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "run a detection or redundancy experiment");
    std::vector<std::uint64_t> exp_seeds;
    std::vector<std::string> exp_methods;
    int exp_budget = 4000, exp_width = 64;
    double exp_eps = 0.01;
    exp_cmd->add_option("--config", config_path, "JSON config with a \"kind\" key; flags override");
    exp_cmd->add_option("--out", out, "output directory")->required();
    exp_cmd->add_option("--seeds", exp_seeds, "seed list")->delimiter(',');
    exp_cmd->add_option("--budget", exp_budget, "oracle evaluations per method and seed");
    exp_cmd->add_option("--width", exp_width, "set-regressor width");
    exp_cmd->add_option("--epsilon", exp_eps, "stochastic greedy accuracy parameter");
    exp_cmd->add_option("--methods", exp_methods, "ranking methods")->delimiter(',');

    // fit-report
    auto* fit_cmd = app.add_subcommand("fit-report", "predicted-vs-true utility on held-out subsets");
    int fit_n = 50, fit_d = 10, fit_samples = 800, fit_held = 200, fit_width = 64;
    fit_cmd->add_option("--config", config_path, "JSON config; flags override");
    fit_cmd->add_option("--out", out, "output directory")->required();
    fit_cmd->add_option("--n", fit_n, "training set size");
    fit_cmd->add_option("--d", fit_d, "feature dimension");
    fit_cmd->add_option("--num-samples", fit_samples, "training sample count");
    fit_cmd->add_option("--held-out", fit_held, "held-out mask count");
    fit_cmd->add_option("--width", fit_width, "set-regressor width");
    fit_cmd->add_option("--seed", seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sample_cmd->parsed())
            return run_sample(*sample_cmd, config_path, sample_oracle, out, sample_m, sample_policy,
                              sample_fixed_k, seed);
        if (value_cmd->parsed())
            return run_value(*value_cmd, config_path, value_oracle, out, value_method, value_perms,
                             value_tol, value_n, seed);
        if (select_cmd->parsed())
            return run_select(*select_cmd, config_path, out, select_oracle_path, select_model, select_data,
                              select_k, select_eps, select_dir, seed);
        if (train_cmd->parsed())
            return run_train_utility(*train_cmd, config_path, out, train_data_path, train_samples_path,
                                     train_width, train_tc, seed);
        if (dom_cmd->parsed())
            return run_dominate(*dom_cmd, config_path, out, dom_game, dom_scores, dom_members, dom_k);
        if (verify_cmd->parsed())
            return run_verify_theory(*verify_cmd, config_path, out, vt_theorem, vt_n, vt_k, vt_c, vt_perms,
                                     seed);
        if (exp_cmd->parsed())
            return run_experiment(*exp_cmd, config_path, out, exp_seeds, exp_budget, exp_width, exp_eps,
                                  exp_methods);
        if (fit_cmd->parsed())
            return run_fit_report(*fit_cmd, config_path, out, fit_n, fit_d, fit_samples, fit_held,
                                  fit_width, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
