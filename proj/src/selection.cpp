#include "sift/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sift/errors.hpp"
#include "sift/rng.hpp"

namespace sift {

SelectionResult stochastic_greedy(const std::function<double(const SubsetMask&)>& value_fn, int n, int k,
                                  double epsilon, Direction dir, std::uint64_t seed) {
    if (k < 0 || k > n) throw ConfigError("stochastic_greedy: k out of range");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("stochastic_greedy: epsilon must lie in (0,1)");

    const double sign = dir == Direction::maximize ? 1.0 : -1.0;
    SelectionResult res;
    res.mask = SubsetMask(n);
    auto call = [&](const SubsetMask& m) {
        ++res.value_calls;
        return sign * value_fn(m);
    };

    const int sample_size = static_cast<int>(std::ceil(static_cast<double>(n) / std::max(k, 1) *
                                                       std::log(1.0 / epsilon)));
    std::vector<int> remaining(n);
    for (int i = 0; i < n; ++i) remaining[i] = i;
    auto rng = make_engine(seed);

    for (int round = 0; round < k; ++round) {
        const double base_value = call(res.mask);
        const int s = std::min<int>(sample_size, static_cast<int>(remaining.size()));
        // Uniform s-subset of the remaining pool via partial Fisher-Yates.
        for (int i = 0; i < s; ++i) {
            std::uniform_int_distribution<int> d(i, static_cast<int>(remaining.size()) - 1);
            std::swap(remaining[i], remaining[d(rng)]);
        }
        std::vector<int> candidates(remaining.begin(), remaining.begin() + s);
        std::sort(candidates.begin(), candidates.end());  // ascending-index tie-break

        int best = -1;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (int c : candidates) {
            const double gain = call(res.mask.with(c)) - base_value;
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        res.mask = res.mask.with(best);
        res.order.push_back(best);
        res.trace.push_back(sign * (base_value + best_gain));
        remaining.erase(std::find(remaining.begin(), remaining.end(), best));
    }
    return res;
}

SelectionResult exhaustive_optimal(const std::function<double(const SubsetMask&)>& value_fn, int n, int k,
                                   Direction dir) {
    if (n > 20) throw CapacityError("exhaustive_optimal: n exceeds the limit of 20");
    if (k < 0 || k > n) throw ConfigError("exhaustive_optimal: k out of range");
    if (binom(n, k) > 2000000ULL)
        throw CapacityError("exhaustive_optimal: C(n,k) exceeds the limit of 2e6 subsets");

    const double sign = dir == Direction::maximize ? 1.0 : -1.0;
    SelectionResult res;
    bool first = true;
    double best = 0.0;
    for_each_subset(n, k, [&](const SubsetMask& m) {
        ++res.value_calls;
        const double v = sign * value_fn(m);
        // Strict improvement keeps the lexicographically smallest tie.
        if (first || v > best) {
            first = false;
            best = v;
            res.mask = m;
        }
    });
    res.order = res.mask.members();
    res.trace.assign(1, sign * best);
    return res;
}

namespace {

SifterOutput run_sifter(const UtilityOracle& oracle, const Dataset& data, int k, Direction dir,
                        const SifterConfig& cfg, std::uint64_t seed) {
    if (oracle.universe_size() != data.size())
        throw ConfigError("datasifter: oracle universe and dataset size differ");

    SifterOutput out;
    out.samples = sample_utilities(oracle, cfg.num_samples, cfg.policy, cfg.fixed_k,
                                   derive_seed(seed, 0xA5), cfg.sample_persist_path);
    out.model = SetRegressor(data.feature_dim(), data.num_classes, cfg.width, derive_seed(seed, 0xB6));
    out.loss_trace = train(out.model, data, out.samples, [&] {
                         TrainConfig t = cfg.train;
                         t.shuffle_seed = derive_seed(seed, 0xC7);
                         return t;
                     }()).loss_trace;

    RegressorEvaluator eval(out.model, data);
    out.selection = stochastic_greedy([&](const SubsetMask& m) { return eval.value(m); }, data.size(), k,
                                      cfg.epsilon, dir, derive_seed(seed, 0xD8));
    return out;
}

}  // namespace

SifterOutput datasifter_select(const UtilityOracle& oracle, const Dataset& data, int k,
                               const SifterConfig& cfg, std::uint64_t seed) {
    return run_sifter(oracle, data, k, Direction::maximize, cfg, seed);
}

SifterOutput datasifter_rank(const UtilityOracle& oracle, const Dataset& data, Direction dir,
                             const SifterConfig& cfg, std::uint64_t seed) {
    return run_sifter(oracle, data, data.size(), dir, cfg, seed);
}

}  // namespace sift
