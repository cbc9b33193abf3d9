#include "sift/least_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "sift/errors.hpp"

namespace sift {

namespace {

// Wide-pivot Gauss-Jordan inverse for the small basis/Gram systems.
// Returns false if the matrix is numerically singular.
bool invert(std::vector<double> a, int n, std::vector<double>& inv) {
    inv.assign(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[std::size_t(i) * n + i] = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[std::size_t(r) * n + col]) > std::abs(a[std::size_t(piv) * n + col])) piv = r;
        }
        if (std::abs(a[std::size_t(piv) * n + col]) < 1e-13) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[std::size_t(piv) * n + c], a[std::size_t(col) * n + c]);
                std::swap(inv[std::size_t(piv) * n + c], inv[std::size_t(col) * n + c]);
            }
        }
        const double s = 1.0 / a[std::size_t(col) * n + col];
        for (int c = 0; c < n; ++c) {
            a[std::size_t(col) * n + c] *= s;
            inv[std::size_t(col) * n + c] *= s;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[std::size_t(r) * n + col];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[std::size_t(r) * n + c] -= f * a[std::size_t(col) * n + c];
                inv[std::size_t(r) * n + c] -= f * inv[std::size_t(col) * n + c];
            }
        }
    }
    return true;
}

// sums[m] = sum_{i in m} x[i] for every mask m, in one O(2^n) sweep.
void subset_sums(const std::vector<double>& x, std::vector<double>& sums) {
    sums[0] = 0.0;
    for (std::size_t m = 1; m < sums.size(); ++m) {
        const int low = std::countr_zero(m);
        sums[m] = sums[m & (m - 1)] + x[low];
    }
}

// Column ids of the dual LP. Nonempty proper subset masks are their own ids;
// the split free multiplier of the efficiency row and the phase-1 artificials
// get negative ids.
constexpr std::int64_t kMuPlus = -1;
constexpr std::int64_t kMuMinus = -2;
constexpr std::int64_t kArtificialBase = -10;  // artificial r has id kArtificialBase - r

struct DualSimplex {
    // max c^T z  s.t.  A z = b, z >= 0, where column S = (indicator(S), 1),
    // mu+/- = (+-1...+-1, 0), b = e_{rows-1}. Solves the least-core LP dual;
    // the simplex multipliers of the optimal basis are the primal (v, e).
    int n;
    int rows;                       // n + 1
    std::size_t full_mask;
    const std::vector<double>& uhat;  // grounded utilities by mask
    double total;                     // uhat[full]

    std::vector<std::int64_t> basis;
    std::vector<double> binv;       // rows x rows
    std::vector<double> xb;         // current basic values
    std::vector<double> y;          // simplex multipliers
    std::vector<double> ysum;       // subset sums of y[0..n-1]
    bool phase1 = true;
    int iterations = 0;

    explicit DualSimplex(int n_, const std::vector<double>& uhat_)
        : n(n_), rows(n_ + 1), full_mask((std::size_t(1) << n_) - 1), uhat(uhat_), total(uhat_[full_mask]) {
        basis.resize(rows);
        for (int r = 0; r < rows; ++r) basis[r] = kArtificialBase - r;
        ysum.resize(std::size_t(1) << n);
        refresh();
    }

    double cost(std::int64_t id) const {
        if (id <= kArtificialBase) return phase1 ? -1.0 : 0.0;
        if (phase1) return 0.0;
        if (id == kMuPlus) return total;
        if (id == kMuMinus) return -total;
        return uhat[static_cast<std::size_t>(id)];
    }

    void column(std::int64_t id, std::vector<double>& col) const {
        col.assign(rows, 0.0);
        if (id <= kArtificialBase) {
            col[static_cast<int>(kArtificialBase - id)] = 1.0;
        } else if (id == kMuPlus || id == kMuMinus) {
            const double s = id == kMuPlus ? 1.0 : -1.0;
            for (int i = 0; i < n; ++i) col[i] = s;
        } else {
            const auto mask = static_cast<std::size_t>(id);
            for (int i = 0; i < n; ++i) {
                if (mask & (std::size_t(1) << i)) col[i] = 1.0;
            }
            col[rows - 1] = 1.0;
        }
    }

    // Rebuilds the basis inverse, basic values, and multipliers from scratch.
    void refresh() {
        std::vector<double> B(std::size_t(rows) * rows), col(rows);
        for (int j = 0; j < rows; ++j) {
            column(basis[j], col);
            for (int r = 0; r < rows; ++r) B[std::size_t(r) * rows + j] = col[r];
        }
        if (!invert(std::move(B), rows, binv)) throw SolverError("least_core: singular simplex basis");
        xb.assign(rows, 0.0);
        for (int r = 0; r < rows; ++r) xb[r] = binv[std::size_t(r) * rows + (rows - 1)];  // b = e_{rows-1}
        y.assign(rows, 0.0);
        for (int r = 0; r < rows; ++r) {
            for (int j = 0; j < rows; ++j) y[r] += cost(basis[j]) * binv[std::size_t(j) * rows + r];
        }
        std::vector<double> yv(y.begin(), y.begin() + n);
        subset_sums(yv, ysum);
    }

    double reduced_cost(std::int64_t id) const {
        if (id <= kArtificialBase) return cost(id) - y[static_cast<int>(kArtificialBase - id)];
        if (id == kMuPlus || id == kMuMinus) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += y[i];
            return id == kMuPlus ? cost(id) - dot : cost(id) + dot;
        }
        return cost(id) - ysum[static_cast<std::size_t>(id)] - y[rows - 1];
    }

    // Best entering column, or 0 when optimal. Dantzig pricing with a Bland
    // fallback once the iteration count suggests stalling.
    std::int64_t pick_entering(bool bland) const {
        const double tol = 1e-10;
        std::int64_t best = 0;
        double best_rc = tol;
        auto consider = [&](std::int64_t id) {
            const double rc = reduced_cost(id);
            if (rc > best_rc) {
                best_rc = rc;
                best = id;
                return true;
            }
            return false;
        };
        for (std::size_t m = 1; m < full_mask; ++m) {
            if (consider(static_cast<std::int64_t>(m)) && bland) return best;
        }
        if (consider(kMuPlus) && bland) return best;
        if (consider(kMuMinus) && bland) return best;
        return best;
    }

    bool in_basis(std::int64_t id) const { return std::find(basis.begin(), basis.end(), id) != basis.end(); }

    // One pivot. Returns false when optimal.
    bool step(int max_iterations) {
        const bool bland = iterations > max_iterations / 2;
        const std::int64_t enter = pick_entering(bland);
        if (enter == 0 || in_basis(enter)) return false;

        std::vector<double> a(rows), d(rows, 0.0);
        column(enter, a);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < rows; ++c) d[r] += binv[std::size_t(r) * rows + c] * a[c];
        }
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < rows; ++r) {
            if (d[r] > 1e-11) {
                const double ratio = xb[r] / d[r];
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (leave < 0 || basis[r] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave < 0) throw SolverError("least_core: dual LP unbounded (inconsistent game values)");
        basis[leave] = enter;
        refresh();
        ++iterations;
        return true;
    }

    void drive_out_artificials() {
        std::vector<double> a(rows);
        for (int r = 0; r < rows; ++r) {
            if (basis[r] > kArtificialBase) continue;
            if (std::abs(xb[r]) > 1e-8) throw SolverError("least_core: dual phase 1 did not reach feasibility");
            // Degenerate pivot: bring in any independent real column.
            bool replaced = false;
            for (std::size_t m = 1; m < full_mask && !replaced; ++m) {
                const auto id = static_cast<std::int64_t>(m);
                if (in_basis(id)) continue;
                column(id, a);
                double dr = 0.0;
                for (int c = 0; c < rows; ++c) dr += binv[std::size_t(r) * rows + c] * a[c];
                if (std::abs(dr) > 1e-8) {
                    basis[r] = id;
                    refresh();
                    replaced = true;
                }
            }
            if (!replaced) throw SolverError("least_core: could not eliminate artificial basis column");
        }
    }

    double objective() const {
        double obj = 0.0;
        for (int r = 0; r < rows; ++r) obj += cost(basis[r]) * xb[r];
        return obj;
    }
};

}  // namespace

LeastCoreSolution least_core(const UtilityOracle& oracle, double tolerance) {
    const int n = oracle.universe_size();
    if (n < 1) throw ConfigError("least_core: empty universe");
    if (n > 15) throw CapacityError("least_core: universe size exceeds the limit of 15");

    // Grounded utilities for every mask.
    const std::size_t count = std::size_t(1) << n;
    std::vector<double> uhat(count);
    for (std::size_t m = 0; m < count; ++m) uhat[m] = oracle.eval(SubsetMask::from_bits(n, m));
    const double u0 = uhat[0];
    for (double& v : uhat) v -= u0;
    const double total = uhat[count - 1];

    LeastCoreSolution sol;
    if (n == 1) {
        // No proper nonempty coalition exists; the excess is 0 by convention.
        sol.payoffs = {total};
        return sol;
    }

    // Phase 1: excess LP via its dual.
    DualSimplex lp(n, uhat);
    const int cap = 2000 + 64 * static_cast<int>(count);
    while (lp.step(cap)) {
        if (lp.iterations > cap) throw SolverError("least_core: phase 1 iteration cap exceeded");
    }
    lp.drive_out_artificials();
    lp.phase1 = false;
    lp.refresh();
    lp.iterations = 0;
    while (lp.step(cap)) {
        if (lp.iterations > cap) throw SolverError("least_core: phase 1 iteration cap exceeded");
    }
    sol.phase1_iterations = lp.iterations;

    std::vector<double> v(lp.y.begin(), lp.y.begin() + n);
    // Exact efficiency repair, then recompute the excess so every constraint
    // holds by construction at the reported e*.
    double shift = total - std::accumulate(v.begin(), v.end(), 0.0);
    for (double& vi : v) vi += shift / n;
    std::vector<double> vsum(count);
    subset_sums(v, vsum);
    double excess = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m + 1 < count; ++m) excess = std::max(excess, uhat[m] - vsum[m]);
    const double lp_excess = lp.objective();
    if (std::abs(excess - lp_excess) > std::max(1.0, std::abs(lp_excess)) * 1e-7)
        throw SolverError("least_core: phase 1 excess mismatch: " + std::to_string(excess) + " vs " +
                          std::to_string(lp_excess));
    sol.excess = excess;

    // Phase 2: minimum-norm point on the optimal face
    //   { v : sum(v) = total, v(S) >= uhat(S) - e* }.
    // Primal active-set projection; the working set always carries the
    // efficiency row (id 0), inequality rows are subset masks.
    std::vector<std::size_t> working{0};
    auto row_dot = [&](std::size_t id, const std::vector<double>& sums, const std::vector<double>& x) {
        return id == 0 ? std::accumulate(x.begin(), x.end(), 0.0) : sums[id];
    };
    auto row_bound = [&](std::size_t id) { return id == 0 ? total : uhat[id] - excess; };

    const int qp_cap = 4000 + 16 * static_cast<int>(count);
    std::vector<double> psum(count), lambda, gram, gram_inv;
    int it = 0;
    for (;; ++it) {
        if (it > qp_cap) throw SolverError("least_core: phase 2 iteration cap exceeded");
        const int w = static_cast<int>(working.size());

        // Projection of -v onto the working-set null space via the Gram system.
        std::vector<std::vector<double>> rows_w(w, std::vector<double>(n, 0.0));
        for (int r = 0; r < w; ++r) {
            if (working[r] == 0) {
                std::fill(rows_w[r].begin(), rows_w[r].end(), 1.0);
            } else {
                for (int i = 0; i < n; ++i) {
                    if (working[r] & (std::size_t(1) << i)) rows_w[r][i] = 1.0;
                }
            }
        }
        gram.assign(std::size_t(w) * w, 0.0);
        for (int a = 0; a < w; ++a) {
            for (int b = a; b < w; ++b) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += rows_w[a][i] * rows_w[b][i];
                gram[std::size_t(a) * w + b] = gram[std::size_t(b) * w + a] = s;
            }
        }
        if (!invert(gram, w, gram_inv)) throw SolverError("least_core: dependent active set");
        std::vector<double> ax(w);
        for (int r = 0; r < w; ++r) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += rows_w[r][i] * v[i];
            ax[r] = s;
        }
        lambda.assign(w, 0.0);
        for (int r = 0; r < w; ++r) {
            for (int c = 0; c < w; ++c) lambda[r] += gram_inv[std::size_t(r) * w + c] * ax[c];
        }
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int r = 0; r < w; ++r) s += rows_w[r][i] * lambda[r];
            p[i] = s - v[i];
        }

        double pnorm = 0.0;
        for (double pi : p) pnorm = std::max(pnorm, std::abs(pi));
        if (pnorm <= 1e-11 * std::max(1.0, std::abs(total))) {
            // Stationary on the working set; check the inequality multipliers.
            // KKT: v = sum lambda_r a_r with lambda >= 0 on inequality rows.
            int drop = -1;
            double most_negative = -1e-9;
            for (int r = 0; r < w; ++r) {
                if (working[r] == 0) continue;
                if (lambda[r] < most_negative) {
                    most_negative = lambda[r];
                    drop = r;
                }
            }
            if (drop < 0) break;
            working.erase(working.begin() + drop);
            continue;
        }

        subset_sums(p, psum);
        subset_sums(v, vsum);
        double alpha = 1.0;
        std::size_t blocker = 0;
        for (std::size_t m = 1; m + 1 < count; ++m) {
            if (std::find(working.begin(), working.end(), m) != working.end()) continue;
            const double ap = row_dot(m, psum, p);
            if (ap >= -1e-12) continue;
            const double slack = vsum[m] - row_bound(m);
            const double am = slack <= 0.0 ? 0.0 : slack / (-ap);
            if (am < alpha - 1e-14) {
                alpha = am;
                blocker = m;
            }
        }
        for (int i = 0; i < n; ++i) v[i] += alpha * p[i];
        if (blocker != 0) {
            working.push_back(blocker);
        }
    }
    sol.phase2_iterations = it;
    sol.active_constraints = static_cast<int>(working.size());

    // Final verification over the full constraint set.
    shift = total - std::accumulate(v.begin(), v.end(), 0.0);
    for (double& vi : v) vi += shift / n;
    subset_sums(v, vsum);
    double violation = 0.0;
    for (std::size_t m = 1; m + 1 < count; ++m) violation = std::max(violation, uhat[m] - excess - vsum[m]);
    sol.max_violation = std::max(0.0, violation);
    sol.efficiency_gap = std::abs(vsum[count - 1] - total);
    if (sol.max_violation > tolerance || sol.efficiency_gap > tolerance)
        throw SolverError("least_core: residuals exceed tolerance (violation " +
                          std::to_string(sol.max_violation) + ", efficiency gap " +
                          std::to_string(sol.efficiency_gap) + ")");
    sol.payoffs = std::move(v);
    return sol;
}

ScoreVector least_core_scores(const UtilityOracle& oracle, double tolerance) {
    auto sol = least_core(oracle, tolerance);
    ScoreVector out;
    out.method = "least-core";
    out.n = oracle.universe_size();
    out.scores = sol.payoffs;
    out.meta["excess"] = sol.excess;
    out.meta["max_violation"] = sol.max_violation;
    out.meta["tolerance"] = tolerance;
    return out;
}

}  // namespace sift
