#pragma once

#include <vector>

#include "sift/subsets.hpp"
#include "sift/utility.hpp"
#include "sift/valuation.hpp"

namespace sift {

// d(n,k): how many size-k subsets have utility <= the selected one.
// Weak counting, so the selected set itself is always included and the
// minimum possible value is 1; d == 1 means the selection is the unique
// worst size-k subset.
struct DominationReport {
    int n = 0;
    int k = 0;
    SubsetMask selected;
    std::uint64_t dominated = 0;  // d(n,k)
    std::uint64_t total = 0;      // C(n,k)
    double selected_utility = 0.0;
    bool is_unique_worst = false;
};

DominationReport domination_count(const UtilityOracle& oracle, const SubsetMask& selected, int k);

// Convenience: selection = linear_select(scores, k) first.
DominationReport domination_count(const UtilityOracle& oracle, const ScoreVector& scores, int k);

// The 3-point counterexample game: no score vector can make the top-k pick
// the best subset for k = 1 and k = 2 simultaneously.
// Utilities: singletons 7/5/5, pairs {0,1} and {0,2} 9, {1,2} 10, full 10.
TabularUtility build_thm1_instance();

// Symmetric c-type game on n points: utility 1 for every nonempty subset
// except single-type subsets of size <= floor(n/c), which score 0. Types are
// contiguous index blocks; the first c-r types (r = n mod c) have floor(n/c)
// points, the last r have ceil(n/c).
struct Thm2Instance {
    TabularUtility game;
    std::vector<int> type_of;  // point index -> type id (0-based)
    int c = 0;
    int r = 0;
};
Thm2Instance build_thm2_instance(int n, int c);

// Monotone submodular game whose exact-Shapley top-k pick {0..k-1} is the
// unique worst size-k subset. Requires n >= 4 and 1 <= k <= n-1. The
// conventional 1-based point names map to 0-based indices (point 1 -> index 0).
TabularUtility build_thm3_instance(int n, int k);

// Brute-force Shapley on build_thm3_instance(n,k) against the closed forms,
// including the score gap and its 2/(n(n-1)) lower bound.
struct ClosedFormReport {
    bool ok = false;
    int n = 0;
    int k = 0;
    double max_abs_err = 0.0;  // |brute force - closed form|, worst coordinate
    double gap = 0.0;          // v(selected block) - v(rest)
    double gap_bound = 0.0;    // 2/(n(n-1))
    std::vector<double> shapley;      // brute force values
    std::vector<double> closed_form;  // per-point closed form values
};
ClosedFormReport verify_closed_form_shapley(int n, int k, double tol = 1e-9);

// For every pair (i,j) interchangeable under the oracle (U(S+i) = U(S+j)
// for all S avoiding both), checks |score_i - score_j| <= tol.
// Universe capped at 12 (the premise is verified exhaustively).
struct SymmetryReport {
    bool ok = true;
    int i = -1;
    int j = -1;
    double diff = 0.0;  // witness |score_i - score_j| when !ok
};
SymmetryReport verify_symmetry(const ScoreVector& scores, const UtilityOracle& oracle, double tol = 1e-9);

}  // namespace sift
