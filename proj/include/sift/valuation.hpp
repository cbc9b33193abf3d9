#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sift/dataset.hpp"
#include "sift/subsets.hpp"
#include "sift/utility.hpp"

namespace sift {

// Per-point scores produced by a valuation method, plus bookkeeping needed
// to reproduce the run (seeds, sample counts, tolerances).
struct ScoreVector {
    std::string method;
    int n = 0;
    std::vector<double> scores;
    nlohmann::json meta = nlohmann::json::object();
};

// Exact Shapley values: v_i = (1/n) sum over S not containing i of
// (U(S+i) - U(S)) / C(n-1, |S|). All 2^n utilities are evaluated once and
// cached. Universe capped at 15.
ScoreVector exact_shapley(const UtilityOracle& oracle);

// Leave-one-out: v_i = U(D) - U(D - {i}).
ScoreVector loo(const UtilityOracle& oracle);

// Monte Carlo Shapley: average marginal contribution over uniformly random
// permutations. Permutation p uses an independent stream derived from
// (seed, p), so results do not depend on evaluation order.
ScoreVector perm_sampling_shapley(const UtilityOracle& oracle, int num_permutations, std::uint64_t seed);

// Truncated Monte Carlo Shapley: identical to permutation sampling, but a
// scan stops once |U(D) - U(prefix)| < tolerance * |U(D)|; the remaining
// points in that permutation get marginal 0. tolerance == 0 disables
// truncation exactly (same bits as perm_sampling_shapley for equal seeds).
ScoreVector tmc_shapley(const UtilityOracle& oracle, int num_permutations, double tolerance,
                        std::uint64_t seed);

// Closed-form Shapley values of the K-nearest-neighbor utility, averaged
// over validation points. For one validation point z with training points
// sorted by distance (ties to the lower index), the farthest point (rank n)
// gets s_n = 1[y_n = y_z] / n and
//   s_j = s_{j+1} + (1[y_j = y_z] - 1[y_{j+1} = y_z]) * min(K, j) / (K j).
ScoreVector knn_shapley(const Dataset& train, const Dataset& validation, int k);

// Uniform [0,1) scores; the random baseline ranking.
ScoreVector random_scores(int n, std::uint64_t seed);

// Top-k by score; ties resolve toward the ascending index.
SubsetMask linear_select(const ScoreVector& scores, int k);

// Pearson product-moment correlation. Returns 0 when either side is constant.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Spearman rank correlation (average ranks on ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sift
