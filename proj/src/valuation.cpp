#include "sift/valuation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "sift/errors.hpp"
#include "sift/kernels.hpp"
#include "sift/rng.hpp"

namespace sift {

ScoreVector exact_shapley(const UtilityOracle& oracle) {
    const int n = oracle.universe_size();
    if (n > 15) throw CapacityError("exact_shapley: universe size exceeds the exact limit of 15");

    std::vector<double> u(std::size_t(1) << n);
    for (std::uint64_t b = 0; b < u.size(); ++b) u[b] = oracle.eval(SubsetMask::from_bits(n, b));

    // weight[s] = 1 / (n * C(n-1, s)) for a coalition of size s.
    std::vector<double> weight(n);
    for (int s = 0; s < n; ++s) weight[s] = 1.0 / (static_cast<double>(n) * binom(n - 1, s));

    ScoreVector out;
    out.method = "exact-shapley";
    out.n = n;
    out.scores.assign(n, 0.0);
    for (std::uint64_t s = 0; s < u.size(); ++s) {
        const int size = std::popcount(s);
        for (int i = 0; i < n; ++i) {
            if (s & (1ULL << i)) continue;
            out.scores[i] += weight[size] * (u[s | (1ULL << i)] - u[s]);
        }
    }
    out.meta["oracle_evals"] = u.size();
    return out;
}

ScoreVector loo(const UtilityOracle& oracle) {
    const int n = oracle.universe_size();
    SubsetMask full(n);
    for (int i = 0; i < n; ++i) full = full.with(i);
    const double u_full = oracle.eval(full);

    ScoreVector out;
    out.method = "loo";
    out.n = n;
    out.scores.assign(n, 0.0);
    for (int i = 0; i < n; ++i) out.scores[i] = u_full - oracle.eval(full.without(i));
    out.meta["oracle_evals"] = n + 1;
    return out;
}

namespace {

// One permutation scan shared by the Monte Carlo estimators. Adds the
// marginal of each scanned point into `acc`; points after a truncation get 0
// implicitly. Returns the number of oracle evaluations spent.
std::uint64_t scan_permutation(const UtilityOracle& oracle, const std::vector<int>& perm, double u_empty,
                               double u_full, double tolerance, std::vector<double>& acc) {
    const int n = static_cast<int>(perm.size());
    SubsetMask prefix(n);
    double prev = u_empty;
    std::uint64_t evals = 0;
    const double cutoff = tolerance * std::abs(u_full);
    for (int j = 0; j < n; ++j) {
        prefix = prefix.with(perm[j]);
        const double cur = oracle.eval(prefix);
        ++evals;
        acc[perm[j]] += cur - prev;
        prev = cur;
        if (tolerance > 0.0 && std::abs(u_full - cur) < cutoff) break;
    }
    return evals;
}

ScoreVector sampled_shapley(const UtilityOracle& oracle, int num_permutations, double tolerance,
                            std::uint64_t seed, const char* method) {
    const int n = oracle.universe_size();
    if (num_permutations < 1) throw ConfigError("permutation sampling: need at least one permutation");
    if (tolerance < 0.0) throw ConfigError("permutation sampling: tolerance must be >= 0");

    SubsetMask full(n);
    for (int i = 0; i < n; ++i) full = full.with(i);
    const double u_empty = oracle.eval(SubsetMask(n));
    const double u_full = oracle.eval(full);
    std::uint64_t evals = 2;

    std::vector<double> acc(n, 0.0);
    std::vector<int> perm(n);
    for (int p = 0; p < num_permutations; ++p) {
        std::iota(perm.begin(), perm.end(), 0);
        auto rng = make_engine(derive_seed(seed, p));
        std::shuffle(perm.begin(), perm.end(), rng);
        evals += scan_permutation(oracle, perm, u_empty, u_full, tolerance, acc);
    }

    ScoreVector out;
    out.method = method;
    out.n = n;
    out.scores.resize(n);
    for (int i = 0; i < n; ++i) out.scores[i] = acc[i] / num_permutations;
    out.meta["permutations"] = num_permutations;
    out.meta["oracle_evals"] = evals;
    out.meta["seed"] = seed;
    if (tolerance > 0.0) out.meta["tolerance"] = tolerance;
    return out;
}

}  // namespace

ScoreVector perm_sampling_shapley(const UtilityOracle& oracle, int num_permutations, std::uint64_t seed) {
    return sampled_shapley(oracle, num_permutations, 0.0, seed, "perm-sv");
}

ScoreVector tmc_shapley(const UtilityOracle& oracle, int num_permutations, double tolerance,
                        std::uint64_t seed) {
    auto out = sampled_shapley(oracle, num_permutations, tolerance, seed, "tmc-sv");
    out.meta["tolerance"] = tolerance;
    return out;
}

ScoreVector knn_shapley(const Dataset& train, const Dataset& validation, int k) {
    train.validate();
    validation.validate();
    if (k < 1) throw ConfigError("knn_shapley: k must be positive");
    if (train.feature_dim() != validation.feature_dim())
        throw ConfigError("knn_shapley: feature dimensions differ");
    if (validation.size() == 0) throw ConfigError("knn_shapley: empty validation set");

    const int n = train.size();
    const int d = train.feature_dim();
    ScoreVector out;
    out.method = "knn-sv";
    out.n = n;
    out.scores.assign(n, 0.0);

    std::vector<std::pair<double, int>> by_dist(n);
    std::vector<double> s(n);
    for (const auto& z : validation.points) {
        for (int i = 0; i < n; ++i) {
            by_dist[i] = {simd::squared_distance(train.points[i].features.data(), z.features.data(), d), i};
        }
        std::sort(by_dist.begin(), by_dist.end());
        auto match = [&](int rank) { return train.points[by_dist[rank].second].label == z.label ? 1.0 : 0.0; };
        s[n - 1] = match(n - 1) / n;
        for (int j = n - 2; j >= 0; --j) {
            const int rank = j + 1;  // 1-based position of the nearer point
            s[j] = s[j + 1] + (match(j) - match(j + 1)) * std::min(k, rank) / (static_cast<double>(k) * rank);
        }
        for (int j = 0; j < n; ++j) out.scores[by_dist[j].second] += s[j];
    }
    for (double& v : out.scores) v /= validation.size();
    out.meta["k"] = k;
    out.meta["validation_points"] = validation.size();
    return out;
}

ScoreVector random_scores(int n, std::uint64_t seed) {
    ScoreVector out;
    out.method = "random";
    out.n = n;
    out.scores.resize(n);
    auto rng = make_engine(seed);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (double& v : out.scores) v = d(rng);
    out.meta["seed"] = seed;
    return out;
}

SubsetMask linear_select(const ScoreVector& scores, int k) {
    if (k < 0 || k > scores.n) throw ConfigError("linear_select: k out of range");
    std::vector<int> idx(scores.n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (scores.scores[a] != scores.scores[b]) return scores.scores[a] > scores.scores[b];
        return a < b;  // ties: lower index first
    });
    idx.resize(k);
    return SubsetMask(scores.n, idx);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) throw ConfigError("pearson: size mismatch or empty input");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson(average_ranks(a), average_ranks(b));
}

}  // namespace sift
