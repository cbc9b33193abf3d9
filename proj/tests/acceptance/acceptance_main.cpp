// Acceptance runner: executes the eleven release criteria end to end and
// prints exactly one PASS/FAIL line per criterion. Criterion 11 drives the
// CLI binary (path via --sift) and byte-compares rerun outputs.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

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
#include "support/references.hpp"

namespace {

namespace fs = std::filesystem;

std::string g_sift_path;
fs::path g_scratch;

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// ---- criterion 1: worst-pick instance grid ----

Check criterion_worst_pick_grid() {
    Check c;
    for (int n = 4; n <= 9 && c.ok; ++n) {
        for (int k = 1; k <= n - 1 && c.ok; ++k) {
            const std::string at = "n=" + std::to_string(n) + " k=" + std::to_string(k);
            const auto game = sift::build_thm3_instance(n, k);
            c.require(sift::check_submodular(game).holds, at + ": not submodular");
            const auto rep = sift::verify_closed_form_shapley(n, k, 1e-9);
            c.require(rep.ok && rep.max_abs_err <= 1e-9,
                      at + ": closed form mismatch, err " + fmt(rep.max_abs_err));
            if (k == 1)
                c.require(std::abs(rep.shapley[0] - 12.0 / n) <= 1e-9,
                          at + ": first point value != 12/n");
            sift::ScoreVector sv;
            sv.method = "exact-shapley";
            sv.n = n;
            sv.scores = rep.shapley;
            const auto pick = sift::linear_select(sv, k);
            std::vector<int> first_block(k);
            for (int i = 0; i < k; ++i) first_block[i] = i;
            c.require(pick.members() == first_block, at + ": selection is not the first block");
            const auto dom = sift::domination_count(game, pick, k);
            c.require(dom.dominated == 1 && dom.is_unique_worst, at + ": selection not the unique worst");
        }
    }
    return c;
}

// ---- criterion 2: counterexample game beats every linear heuristic ----

Check criterion_counterexample_heuristics() {
    Check c;
    const auto game = sift::build_thm1_instance();
    const sift::CachingOracle cache(game);
    const std::vector<std::pair<std::string, sift::ScoreVector>> methods = {
        {"exact-shapley", sift::exact_shapley(cache)},
        {"loo", sift::loo(cache)},
        {"least-core", sift::least_core_scores(cache)},
        {"perm-sv", sift::perm_sampling_shapley(cache, 4000, 20260814)},
        {"tmc-sv", sift::tmc_shapley(cache, 4000, 0.01, 73)},
    };
    for (const auto& [name, scores] : methods) {
        const auto d1 = sift::domination_count(cache, scores, 1);
        const auto d2 = sift::domination_count(cache, scores, 2);
        c.require(!(d1.dominated == d1.total && d2.dominated == d2.total),
                  name + ": optimal at both sizes, which the instance forbids");
        const int first = sift::linear_select(scores, 1).members()[0];
        if (first == 0)
            c.require(d2.dominated <= 2,
                      name + ": first pick 0 but pair domination " + std::to_string(d2.dominated) + " > 2");
    }
    return c;
}

// ---- criterion 3: type-block instances ----

Check criterion_type_blocks() {
    Check c;
    for (int n : {6, 8, 9, 10}) {
        for (int cc = 2; cc <= n && c.ok; ++cc) {
            const std::string at = "n=" + std::to_string(n) + " c=" + std::to_string(cc);
            const auto inst = sift::build_thm2_instance(n, cc);
            const sift::CachingOracle cache(inst.game);
            const auto sv = sift::exact_shapley(cache);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (inst.type_of[i] == inst.type_of[j])
                        c.require(std::abs(sv.scores[i] - sv.scores[j]) <= 1e-9,
                                  at + ": within-type score spread exceeds 1e-9");
            const int lo = n / cc;
            for (int k = 1; k <= lo && c.ok; ++k) {
                const auto pick = sift::linear_select(sv, k);
                c.require(cache.eval(pick) == 0.0, at + ": selection utility nonzero at k=" + std::to_string(k));
                const auto dom = sift::domination_count(cache, pick, k);
                const std::uint64_t bound =
                    static_cast<std::uint64_t>(cc - inst.r) * sift::binom(lo, k) +
                    static_cast<std::uint64_t>(inst.r) * sift::binom(lo + 1, k);
                c.require(dom.dominated <= bound, at + ": domination exceeds the bound at k=" + std::to_string(k));
            }
        }
    }
    return c;
}

// ---- criterion 4: estimator consistency over 200 seeds ----

Check criterion_estimator_consistency() {
    Check c;
    const int seeds = 200, perms = 4000;
    std::vector<std::pair<std::string, sift::TabularUtility>> games;
    games.emplace_back("counterexample-n3", sift::build_thm1_instance());
    games.emplace_back("random-n5", refs::random_game(5, 0xC0FFEE));
    games.emplace_back("random-n6", refs::random_game(6, 0xBEEF));
    for (const auto& [name, game] : games) {
        const int n = game.universe_size();
        const sift::CachingOracle cache(game);
        const auto exact = sift::exact_shapley(cache);
        std::vector<std::vector<double>> est(seeds);
        for (int s = 0; s < seeds; ++s)
            est[s] = sift::perm_sampling_shapley(cache, perms, sift::derive_seed(0xACC4, s)).scores;
        // Across-seed mean and standard deviation per coordinate; the seeds
        // provide the empirical standard error.
        int violations = 0;
        for (int i = 0; i < n; ++i) {
            double mean = 0.0;
            for (int s = 0; s < seeds; ++s) mean += est[s][i];
            mean /= seeds;
            double var = 0.0;
            for (int s = 0; s < seeds; ++s) var += (est[s][i] - mean) * (est[s][i] - mean);
            var /= (seeds - 1);
            const double sd = std::sqrt(var);
            if (sd == 0.0) {
                c.require(std::abs(mean - exact.scores[i]) <= 1e-12,
                          name + ": degenerate estimator off the exact value");
                continue;
            }
            c.require(std::abs(mean - exact.scores[i]) <= 3.0 * sd / std::sqrt(double(seeds)),
                      name + ": coordinate " + std::to_string(i) + " grand mean outside 3 standard errors");
            for (int s = 0; s < seeds; ++s)
                if (std::abs(est[s][i] - exact.scores[i]) > 3.0 * sd) ++violations;
        }
        // Individual runs may stray past 3 sigma at the textbook 0.27% rate;
        // anything above 1% of runs signals real bias.
        c.require(violations <= (seeds * n + 99) / 100,
                  name + ": " + std::to_string(violations) + " of " + std::to_string(seeds * n) +
                      " run-coordinates beyond 3 standard errors");
        for (int s = 0; s < 10; ++s) {
            const auto tmc = sift::tmc_shapley(cache, perms, 0.0, sift::derive_seed(0xACC4, s));
            c.require(tmc.scores == est[s], name + ": zero-tolerance truncation not bit-identical, seed " +
                                                std::to_string(s));
        }
    }
    return c;
}

// ---- criterion 5: knn scores equal the induced game's exact values ----

Check criterion_knn_equivalence() {
    Check c;
    auto rng = sift::make_engine(0x55AA);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 5 + trial % 4;  // 5..8, all >= K = 5
        const auto train = sift::gen_synthetic_gaussian(n, 3, rng());
        const auto validation = sift::gen_synthetic_gaussian(6, 3, rng());
        const auto direct = sift::knn_shapley(train, validation, 5);
        const auto exact = sift::exact_shapley(refs::induced_knn_game(train, validation, 5));
        for (int i = 0; i < n; ++i)
            c.require(std::abs(direct.scores[i] - exact.scores[i]) <= 1e-6,
                      "trial " + std::to_string(trial) + ": coordinate " + std::to_string(i) + " off by " +
                          fmt(std::abs(direct.scores[i] - exact.scores[i])));
        if (!c.ok) break;
    }
    return c;
}

// ---- criterion 6: least core vs the independent reference LP ----

Check criterion_least_core() {
    Check c;
    for (const auto& [name, game] : refs::small_game_corpus()) {
        const int n = game.universe_size();
        if (n > 10) continue;
        const auto sol = sift::least_core(game);
        const double u0 = game.eval(sift::SubsetMask(n, {}));
        double vsum = 0.0;
        for (double v : sol.payoffs) vsum += v;
        const double full = game.eval(sift::SubsetMask::from_bits(n, (1ULL << n) - 1)) - u0;
        c.require(std::abs(vsum - full) <= 1e-6, name + ": efficiency violated");
        for (std::uint64_t bits = 1; bits + 1 < (1ULL << n); ++bits) {
            double alloc = 0.0;
            for (int i = 0; i < n; ++i)
                if (bits >> i & 1) alloc += sol.payoffs[i];
            const double uhat = game.eval(sift::SubsetMask::from_bits(n, bits)) - u0;
            if (alloc + sol.excess < uhat - 1e-6) {
                c.require(false, name + ": coalition constraint violated beyond 1e-6");
                break;
            }
        }
        const double ref = refs::least_core_excess_reference(game);
        c.require(std::abs(sol.excess - ref) <= 1e-6,
                  name + ": excess " + fmt(sol.excess) + " vs reference " + fmt(ref));
        const auto sym = sift::verify_symmetry(sift::least_core_scores(game), game, 1e-6);
        c.require(sym.ok, name + ": symmetric players differ by " + fmt(sym.diff));
        if (!c.ok) break;
    }
    return c;
}

// ---- criterion 7: stochastic greedy guarantee ----

Check criterion_greedy_guarantee() {
    Check c;
    const double epsilon = 0.1;
    const double factor = 1.0 - 1.0 / std::exp(1.0) - epsilon;
    for (int inst = 0; inst < 20; ++inst) {
        const auto cov = refs::random_coverage(15, 30, 9000 + inst);
        auto fn = [&](const sift::SubsetMask& m) { return cov.value(m); };
        const double opt = cov.value(sift::exhaustive_optimal(fn, 15, 4, sift::Direction::maximize).mask);
        double mean = 0.0;
        for (int s = 0; s < 200; ++s)
            mean += cov.value(
                sift::stochastic_greedy(fn, 15, 4, epsilon, sift::Direction::maximize,
                                        sift::derive_seed(0x9EED, inst * 1000 + s))
                    .mask);
        mean /= 200.0;
        c.require(mean >= factor * opt, "instance " + std::to_string(inst) + ": mean " + fmt(mean) +
                                            " below " + fmt(factor * opt));
        if (!c.ok) break;
    }
    return c;
}

// ---- criterion 8: utility learning ----

Check criterion_utility_learning() {
    Check c;
    // (a) analytic gradient vs central finite differences over every parameter.
    {
        const auto data = sift::gen_synthetic_gaussian(8, 3, 64001);
        std::vector<sift::UtilitySample> samples;
        auto rng = sift::make_engine(64002);
        for (int i = 0; i < 12; ++i) {
            const auto mask =
                sift::sample_subset(8, sift::SamplePolicy::uniform_size_then_uniform_subset, 0, rng);
            double s = 0.0;
            for (int idx : mask.members())
                for (double f : data[idx].features) s += f;
            samples.push_back({mask, std::tanh(0.3 * s) + 0.05 * mask.size()});
        }
        sift::SetRegressor model(3, 2, 8, 64003);
        const auto grad = sift::mse_gradient(model, data, samples);
        const double h = 1e-5;
        double max_rel = 0.0;
        for (std::size_t j = 0; j < grad.size(); ++j) {
            auto plus = model, minus = model;
            plus.params[j] += h;
            minus.params[j] -= h;
            const double fd =
                (sift::mse_loss(plus, data, samples) - sift::mse_loss(minus, data, samples)) / (2 * h);
            max_rel = std::max(max_rel, std::abs(fd - grad[j]) / std::max(std::abs(fd) + std::abs(grad[j]), 1e-8));
        }
        c.require(max_rel < 1e-4, "gradient max relative error " + fmt(max_rel));
    }
    // (b) memorization of 10 samples.
    {
        const auto data = sift::gen_synthetic_gaussian(10, 4, 64010);
        std::vector<sift::UtilitySample> samples;
        auto rng = sift::make_engine(64011);
        for (int i = 0; i < 10; ++i) {
            const auto mask =
                sift::sample_subset(10, sift::SamplePolicy::uniform_size_then_uniform_subset, 0, rng);
            double s = 0.0;
            for (int idx : mask.members())
                for (double f : data[idx].features) s += f;
            samples.push_back({mask, std::tanh(0.3 * s) + 0.05 * mask.size()});
        }
        sift::SetRegressor model(4, 2, 32, 64012);
        sift::TrainConfig cfg;
        cfg.epochs = 600;
        cfg.batch_size = 10;
        cfg.learning_rate = 3e-3;
        cfg.shuffle_seed = 64013;
        sift::train(model, data, samples, cfg);
        double mse = 0.0;
        for (const auto& s : samples) {
            const double err = model.predict(data, s.mask) - s.utility;
            mse += err * err;
        }
        mse /= samples.size();
        c.require(mse < 1e-3, "memorization MSE " + fmt(mse));
    }
    // (c) held-out correlation on the reduced regression setup.
    {
        sift::FitConfig cfg;  // n=50 d=10, 800 samples, 200 held out
        const auto report = sift::run_utility_fit_report(cfg);
        c.require(report.pearson >= 0.6, "held-out pearson " + fmt(report.pearson));
    }
    return c;
}

// ---- criterion 9: redundant-negatives selection demo ----

Check criterion_redundancy() {
    Check c;
    sift::LogisticTrainConfig proxy;
    sift::SifterConfig sifter;
    sifter.num_samples = 2000;
    sifter.width = 32;
    sifter.train.epochs = 40;
    sifter.train.learning_rate = 1e-3;
    sifter.epsilon = 0.1;
    int good_seeds = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto pool = sift::gen_redundant_2d(sift::derive_seed(seed, 11));
        const auto validation = sift::balanced_validation_2d(25, sift::derive_seed(seed, 12));
        const sift::ProxyUtilityOracle oracle(pool, validation, sift::ProxyKind::logistic,
                                              sift::ProxyMetric::accuracy, proxy);
        const sift::CachingOracle cache(oracle);
        const double majority = cache.eval(sift::SubsetMask(15, {}));

        const std::vector<std::pair<std::string, sift::ScoreVector>> linear = {
            {"exact-shapley", sift::exact_shapley(cache)},
            {"loo", sift::loo(cache)},
            {"least-core", sift::least_core_scores(cache)},
        };
        for (const auto& [name, scores] : linear) {
            for (int k = 1; k <= 5; ++k) {
                const auto pick = sift::linear_select(scores, k);
                bool single_class = true;
                for (int i : pick.members()) single_class = single_class && pool[i].label == pool[pick.members()[0]].label;
                c.require(single_class, "seed " + std::to_string(seed) + " " + name + " k=" +
                                            std::to_string(k) + ": selection mixes classes");
                c.require(std::abs(cache.eval(pick) - majority) <= 1e-12,
                          "seed " + std::to_string(seed) + " " + name + " k=" + std::to_string(k) +
                              ": utility differs from the majority baseline");
            }
        }

        auto oracle_fn = [&](const sift::SubsetMask& m) { return cache.eval(m); };
        bool seed_good = true;
        for (int k : {4, 5}) {
            const double opt = cache.eval(sift::exhaustive_optimal(oracle_fn, 15, k,
                                                                   sift::Direction::maximize).mask);
            c.require(opt > majority, "seed " + std::to_string(seed) + " k=" + std::to_string(k) +
                                          ": exhaustive optimum does not beat the baseline");
            const auto out = sift::datasifter_select(cache, pool, k, sifter, sift::derive_seed(seed, 900 + k));
            if (cache.eval(out.selection.mask) <= majority) seed_good = false;
        }
        if (seed_good) ++good_seeds;
    }
    c.require(good_seeds >= 4, "learned selection beat the baseline at k=4,5 in only " +
                                   std::to_string(good_seeds) + " of 5 seeds");
    return c;
}

// ---- criterion 10: mislabel detection ----

Check criterion_detection() {
    Check c;
    sift::DetectionConfig cfg;
    cfg.methods = {"datasifter", "random"};
    const auto result = sift::run_detection_experiment(cfg);
    c.require(result.skipped.empty(), "methods were skipped unexpectedly");
    double sifter_auc = 0.0, random_auc = 0.0, base_acc = 0.0, filtered_acc = 0.0;
    const int grid_20 = 4;  // inspection grid index of the 20% mark
    for (const auto& [method, series] : result.curves) {
        for (const auto& s : series) {
            if (method == "datasifter") {
                sifter_auc += s.curve.auc;
                base_acc += s.accuracy.front();
                filtered_acc += s.accuracy[grid_20];
            } else if (method == "random") {
                random_auc += s.curve.auc;
            }
        }
    }
    const double ns = static_cast<double>(cfg.seeds.size());
    sifter_auc /= ns;
    random_auc /= ns;
    base_acc /= ns;
    filtered_acc /= ns;
    c.require(sifter_auc - random_auc >= 0.1, "detection auc gap " + fmt(sifter_auc - random_auc) +
                                                  " (ranked " + fmt(sifter_auc) + " vs random " +
                                                  fmt(random_auc) + ")");
    c.require(filtered_acc >= base_acc, "filtered accuracy " + fmt(filtered_acc) +
                                            " below the unfiltered baseline " + fmt(base_acc));
    return c;
}

// ---- criterion 11: CLI determinism ----

int run_cli(const std::vector<std::string>& args, const std::string& log_name) {
    std::string cmd = "'" + g_sift_path + "'";
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " > '" + (g_scratch / log_name).string() + "' 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool same_bytes(const fs::path& a, const fs::path& b, std::string& why) {
    if (!fs::exists(a) || !fs::exists(b)) {
        why = "missing output: " + (fs::exists(a) ? b.string() : a.string());
        return false;
    }
    if (slurp(a) != slurp(b)) {
        why = "byte mismatch: " + a.string() + " vs " + b.string();
        return false;
    }
    return true;
}

bool same_dir(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    std::vector<std::string> other;
    for (const auto& e : fs::directory_iterator(b)) other.push_back(e.path().filename().string());
    std::sort(other.begin(), other.end());
    if (names != other) {
        why = "directory listings differ: " + a.string() + " vs " + b.string();
        return false;
    }
    for (const auto& name : names)
        if (!same_bytes(a / name, b / name, why)) return false;
    return true;
}

Check criterion_cli_determinism() {
    Check c;
    const fs::path root = g_scratch / "cli";
    const fs::path a = root / "a", b = root / "b";
    fs::create_directories(a);
    fs::create_directories(b);

    // Shared inputs, written through the library.
    const std::string game_path = (root / "game.json").string();
    sift::write_tabular_utility(game_path, refs::random_game(8, 0xABCD));
    const std::string data_path = (root / "data.jsonl").string();
    const std::string val_path = (root / "val.jsonl").string();
    sift::write_dataset(data_path, sift::gen_synthetic_gaussian(12, 3, 71));
    sift::write_dataset(val_path, sift::gen_synthetic_gaussian(30, 3, 72));
    {
        nlohmann::json red;
        sift::RedundancyConfig rc;
        rc.max_k = 2;
        rc.methods = {"loo"};
        rc.seeds = {1};
        rc.validation_per_class = 10;
        rc.budget = 60;
        rc.width = 8;
        rc.train.epochs = 2;
        to_json(red, rc);
        sift::write_json_file((root / "red.json").string(), red);
    }

    struct Step {
        std::string name;
        std::vector<std::string> first;      // primary invocation (out -> A)
        std::string artifact;                // output file/dir name inside A and B
        bool is_dir = false;
    };
    const std::string A = a.string() + "/", B = b.string() + "/";
    const std::vector<Step> steps = {
        {"sample",
         {"sample", "--game", game_path, "--out", A + "samples.jsonl", "--num-samples", "60", "--seed", "5"},
         "samples.jsonl"},
        {"value",
         {"value", "--game", game_path, "--method", "tmc-sv", "--permutations", "300", "--tolerance",
          "0.05", "--seed", "9", "--out", A + "scores.json"},
         "scores.json"},
        {"sample-proxy",
         {"sample", "--data", data_path, "--validation", val_path, "--proxy", "knn", "--out",
          A + "dsamples.jsonl", "--num-samples", "40", "--seed", "3"},
         "dsamples.jsonl"},
        {"train-utility",
         {"train-utility", "--data", data_path, "--samples", A + "dsamples.jsonl", "--width", "8",
          "--epochs", "4", "--out", A + "model.json", "--seed", "11"},
         "model.json"},
        {"select",
         {"select", "--model", A + "model.json", "--data", data_path, "--k", "3", "--epsilon", "0.2",
          "--seed", "13", "--out", A + "selection.json"},
         "selection.json"},
        {"select-oracle",
         {"select", "--oracle", game_path, "--k", "2", "--direction", "min", "--seed", "17", "--out",
          A + "selection_game.json"},
         "selection_game.json"},
        {"dominate",
         {"dominate", "--game", game_path, "--scores", A + "scores.json", "--k", "2", "--out",
          A + "domination.json"},
         "domination.json"},
        {"verify-theory",
         {"verify-theory", "--theorem", "3", "--n", "6", "--k", "2", "--out", A + "verify.json"},
         "verify.json"},
        {"experiment",
         {"experiment", "--config", (root / "red.json").string(), "--out", A + "red"},
         "red", true},
        {"fit-report",
         {"fit-report", "--n", "10", "--d", "3", "--num-samples", "50", "--held-out", "15", "--width",
          "8", "--seed", "2", "--out", A + "fit"},
         "fit", true},
    };

    for (const auto& step : steps) {
        if (run_cli(step.first, step.name + "-a.log") != 0) {
            c.require(false, step.name + ": first run failed (see " + step.name + "-a.log)");
            return c;
        }
        // Rerun purely from the persisted resolved config, into the B tree.
        const std::string cfg_path = step.is_dir ? A + step.artifact + "/config.json"
                                                 : A + step.artifact + ".config.json";
        std::vector<std::string> rerun = {step.first[0], "--config", cfg_path, "--out", B + step.artifact};
        if (run_cli(rerun, step.name + "-b.log") != 0) {
            c.require(false, step.name + ": rerun from persisted config failed");
            return c;
        }
        std::string why;
        if (step.is_dir) {
            c.require(same_dir(A + step.artifact, B + step.artifact, why), step.name + ": " + why);
        } else {
            c.require(same_bytes(A + step.artifact, B + step.artifact, why), step.name + ": " + why);
            std::string why2;
            c.require(same_bytes(A + step.artifact + ".config.json", B + step.artifact + ".config.json",
                                 why2),
                      step.name + ": resolved configs differ: " + why2);
        }
        if (!c.ok) return c;
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--sift") g_sift_path = argv[i + 1];

    g_scratch = fs::temp_directory_path() / ("sift-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(g_scratch);

    struct Criterion {
        std::string label;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {"worst-pick grid: submodular, closed-form scores, unique-worst selection", criterion_worst_pick_grid},
        {"counterexample game defeats every linear heuristic", criterion_counterexample_heuristics},
        {"type-block instances: symmetry, zero-utility selections, domination bounds", criterion_type_blocks},
        {"permutation estimator consistency and zero-tolerance bit-identity", criterion_estimator_consistency},
        {"knn scores equal exact values of the induced game", criterion_knn_equivalence},
        {"least core: feasibility, reference excess, symmetric payoffs", criterion_least_core},
        {"stochastic greedy approximation guarantee", criterion_greedy_guarantee},
        {"set regressor: gradients, memorization, held-out correlation", criterion_utility_learning},
        {"redundant negatives: learned selection beats linear heuristics", criterion_redundancy},
        {"mislabel detection beats random and filtering helps", criterion_detection},
        {"CLI reruns from persisted configs are byte-identical", criterion_cli_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (i + 1 == criteria.size() && g_sift_path.empty()) {
            std::cout << "criterion 11: FAIL " << criteria[i].label << " (no --sift binary path)\n";
            ++failures;
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Check result;
        try {
            result = criteria[i].run();
        } catch (const std::exception& e) {
            result.ok = false;
            result.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        // Criteria with an explicit runtime budget.
        if (i == 0 && secs >= 60.0) result = {false, "runtime " + fmt(secs) + "s exceeds 60s"};
        if (i == 2 && secs >= 60.0) result = {false, "runtime " + fmt(secs) + "s exceeds 60s"};
        if (i == 6 && secs >= 120.0) result = {false, "runtime " + fmt(secs) + "s exceeds 2min"};
        if (i == 9 && secs >= 600.0) result = {false, "runtime " + fmt(secs) + "s exceeds 10min"};
        std::cout << "criterion " << (i + 1) << ": " << (result.ok ? "PASS " : "FAIL ") << criteria[i].label
                  << " [" << fmt(secs) << "s]";
        if (!result.ok) std::cout << " -- " << result.detail;
        std::cout << "\n" << std::flush;
        if (!result.ok) ++failures;
    }

    if (failures == 0) fs::remove_all(g_scratch);
    else std::cout << "artifacts kept at " << g_scratch << "\n";
    return failures == 0 ? 0 : 1;
}
