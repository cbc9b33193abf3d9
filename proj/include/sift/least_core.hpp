#pragma once

#include <vector>

#include "sift/utility.hpp"
#include "sift/valuation.hpp"

namespace sift {

// Least-core allocation of the grounded game Uhat(S) = U(S) - U(empty):
//   phase 1 solves   min e  s.t.  v(S) + e >= Uhat(S) for all proper
//   nonempty S, sum(v) = Uhat(D);
//   phase 2 picks the minimum-l2-norm v on the optimal face (e = e*).
// Universe capped at 15 (all 2^n constraints are enumerated).
struct LeastCoreSolution {
    std::vector<double> payoffs;
    double excess = 0.0;                // e*
    double max_violation = 0.0;         // worst constraint residual of the returned v
    double efficiency_gap = 0.0;        // |sum(v) - Uhat(D)|
    int phase1_iterations = 0;
    int phase2_iterations = 0;
    int active_constraints = 0;         // working set size at the phase-2 optimum
};

// `tolerance` bounds the verified residuals; a solve whose residuals exceed
// it raises SolverError carrying the residuals.
LeastCoreSolution least_core(const UtilityOracle& oracle, double tolerance = 1e-7);

// The same allocation packaged as a ScoreVector for ranking pipelines.
ScoreVector least_core_scores(const UtilityOracle& oracle, double tolerance = 1e-7);

}  // namespace sift
