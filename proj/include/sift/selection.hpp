#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sift/learning.hpp"
#include "sift/subsets.hpp"
#include "sift/utility.hpp"

namespace sift {

enum class Direction { maximize, minimize };

struct SelectionResult {
    SubsetMask mask;            // canonical ascending members
    std::vector<int> order;     // pick order
    std::vector<double> trace;  // objective value after each pick
    std::int64_t value_calls = 0;
};

// Lazier-than-lazy greedy: each round draws
//   s = min(#remaining, ceil((n/k) * ln(1/epsilon)))
// candidates uniformly without replacement from the unselected points and
// keeps the best marginal gain (ties toward the ascending index). Spends at
// most k*s + k value_fn calls. minimize runs the same loop on the negated
// function. Requires 0 < epsilon < 1.
SelectionResult stochastic_greedy(const std::function<double(const SubsetMask&)>& value_fn, int n, int k,
                                  double epsilon, Direction dir, std::uint64_t seed);

// Scans every size-k subset in lexicographic order and keeps the best
// (the lexicographically smallest among exact ties). Requires n <= 20 and
// C(n,k) <= 2e6.
SelectionResult exhaustive_optimal(const std::function<double(const SubsetMask&)>& value_fn, int n, int k,
                                   Direction dir);

struct SifterConfig {
    int num_samples = 4000;
    SamplePolicy policy = SamplePolicy::uniform_size_then_uniform_subset;
    int fixed_k = 0;            // only read under SamplePolicy::fixed_size
    int width = 128;
    TrainConfig train;
    double epsilon = 0.1;
    std::string sample_persist_path;  // optional resume file for the sampling stage
};

struct SifterOutput {
    SelectionResult selection;
    SetRegressor model;
    std::vector<double> loss_trace;
    std::vector<UtilitySample> samples;
};

// The learn-then-optimize pipeline: sample utilities from the oracle, fit
// the set regressor, then run stochastic greedy against the fitted model
// (never against the oracle).
SifterOutput datasifter_select(const UtilityOracle& oracle, const Dataset& data, int k,
                               const SifterConfig& cfg, std::uint64_t seed);

// Full ranking: greedy to k = n; the pick order is the ranking. minimize
// yields a worst-first (harmful-first) order.
SifterOutput datasifter_rank(const UtilityOracle& oracle, const Dataset& data, Direction dir,
                             const SifterConfig& cfg, std::uint64_t seed);

}  // namespace sift
