#include "sift/domination.hpp"

#include <algorithm>
#include <cmath>

#include "sift/errors.hpp"

namespace sift {

DominationReport domination_count(const UtilityOracle& oracle, const SubsetMask& selected, int k) {
    const int n = oracle.universe_size();
    if (selected.universe_size() != n) throw ConfigError("domination_count: mask universe mismatch");
    if (selected.size() != k) throw ConfigError("domination_count: selected set is not of size k");
    if (n > 20) throw CapacityError("domination_count: n exceeds the limit of 20");
    if (binom(n, k) > 2000000ULL)
        throw CapacityError("domination_count: C(n,k) exceeds the limit of 2e6 subsets");

    DominationReport rep;
    rep.n = n;
    rep.k = k;
    rep.selected = selected;
    rep.total = binom(n, k);
    rep.selected_utility = oracle.eval(selected);
    for_each_subset(n, k, [&](const SubsetMask& m) {
        if (oracle.eval(m) <= rep.selected_utility) ++rep.dominated;
    });
    rep.is_unique_worst = rep.dominated == 1;
    return rep;
}

DominationReport domination_count(const UtilityOracle& oracle, const ScoreVector& scores, int k) {
    return domination_count(oracle, linear_select(scores, k), k);
}

TabularUtility build_thm1_instance() {
    TabularUtility game(3);
    auto set = [&](std::vector<int> members, double v) { game.set_entry(SubsetMask(3, std::move(members)), v); };
    set({}, 0.0);
    set({0}, 7.0);
    set({1}, 5.0);
    set({2}, 5.0);
    set({0, 1}, 9.0);
    set({0, 2}, 9.0);
    set({1, 2}, 10.0);
    set({0, 1, 2}, 10.0);
    return game;
}

Thm2Instance build_thm2_instance(int n, int c) {
    if (c < 2 || c > n) throw ConfigError("build_thm2_instance: need 2 <= c <= n");
    if (n > 20) throw CapacityError("build_thm2_instance: n exceeds the limit of 20");

    Thm2Instance inst{TabularUtility(n), std::vector<int>(n, 0), c, n % c};
    const int lo = n / c;  // first c-r types get lo points, last r get lo+1
    int next = 0;
    std::vector<std::vector<int>> blocks(c);
    for (int t = 0; t < c; ++t) {
        const int sz = t < c - inst.r ? lo : lo + 1;
        for (int j = 0; j < sz; ++j) {
            inst.type_of[next] = t;
            blocks[t].push_back(next++);
        }
    }

    inst.game.set_default(TabularUtility::DefaultKind::constant, {1.0});
    inst.game.set_entry(SubsetMask(n), 0.0);
    // Single-type subsets up to size floor(n/c) are worthless.
    for (const auto& block : blocks) {
        for (int s = 1; s <= std::min<int>(lo, static_cast<int>(block.size())); ++s) {
            std::vector<int> pick(s);
            for_each_subset(static_cast<int>(block.size()), s, [&](const SubsetMask& sub) {
                for (int j = 0; j < s; ++j) pick[j] = block[sub.members()[j]];
                inst.game.set_entry(SubsetMask(n, pick), 0.0);
            });
        }
    }
    return inst;
}

TabularUtility build_thm3_instance(int n, int k) {
    if (n < 4 || k < 1 || k > n - 1) throw ConfigError("build_thm3_instance: need n >= 4 and 1 <= k <= n-1");
    if (n > 15) throw CapacityError("build_thm3_instance: n exceeds the limit of 15");

    TabularUtility game(n);
    const std::uint64_t first_block = (1ULL << k) - 1;  // {0..k-1}
    for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
        const auto mask = SubsetMask::from_bits(n, b);
        const int s = mask.size();
        double v = 0.0;
        if (k == 1) {
            if (s == 1) {
                v = b == 1 ? 6.0 : 7.0;
            } else if (s == 2) {
                v = (b & 1) ? 11.0 : 9.0;
            } else if (s >= 3) {
                v = 11.0;
            }
        } else if (k == 2) {
            if (s == 1) {
                v = b <= 2 ? 7.0 : 5.0;  // singletons {0} and {1}
            } else if (s == 2) {
                v = b == first_block ? 8.0 : 9.0;
            } else if (s >= 3) {
                v = 9.0;
            }
        } else {
            if (s == 1) {
                v = (b & first_block) ? 7.0 : 5.0;
            } else if (s >= 2 && s <= k - 1) {
                v = 2.0 * s + 5.0;
            } else if (s == k) {
                v = b == first_block ? 2.0 * k + 4.0 : 2.0 * k + 5.0;
            } else if (s >= k + 1) {
                v = 2.0 * k + 5.0;
            }
        }
        game.set_entry(mask, v);
    }
    return game;
}

ClosedFormReport verify_closed_form_shapley(int n, int k, double tol) {
    ClosedFormReport rep;
    rep.n = n;
    rep.k = k;
    const auto game = build_thm3_instance(n, k);
    rep.shapley = exact_shapley(game).scores;

    double va = 0.0, vb = 0.0;
    const double nn = n;
    if (k == 1) {
        va = 12.0 / nn;
        vb = (11.0 - 1.0 / (nn - 1.0)) / nn;
    } else if (k == 2) {
        va = (11.0 - 3.0 / (nn - 1.0)) / nn;
        vb = (9.0 - 4.0 / (nn - 1.0) + 2.0 / ((nn - 1.0) * (nn - 2.0))) / nn;
    } else {
        va = (2.0 * k + 3.0 + (4.0 * nn - 2.0 * k - 2.0) / (nn - 1.0) -
              1.0 / static_cast<double>(binom(n - 1, k - 1))) / nn;
        vb = (2.0 * k + 1.0 + (4.0 * nn - 2.0 * k - 4.0) / (nn - 1.0) +
              1.0 / static_cast<double>(binom(n - 1, k))) / nn;
    }
    rep.closed_form.assign(n, vb);
    for (int i = 0; i < k; ++i) rep.closed_form[i] = va;

    rep.max_abs_err = 0.0;
    for (int i = 0; i < n; ++i)
        rep.max_abs_err = std::max(rep.max_abs_err, std::abs(rep.shapley[i] - rep.closed_form[i]));
    rep.gap = va - vb;
    rep.gap_bound = 2.0 / (nn * (nn - 1.0));
    rep.ok = rep.max_abs_err <= tol && rep.gap >= rep.gap_bound - tol && rep.gap > 0.0;
    return rep;
}

SymmetryReport verify_symmetry(const ScoreVector& scores, const UtilityOracle& oracle, double tol) {
    const int n = oracle.universe_size();
    if (scores.n != n) throw ConfigError("verify_symmetry: score/oracle size mismatch");
    if (n > 12) throw CapacityError("verify_symmetry: n exceeds the exhaustive limit of 12");

    std::vector<double> u(std::size_t(1) << n);
    for (std::uint64_t b = 0; b < u.size(); ++b) u[b] = oracle.eval(SubsetMask::from_bits(n, b));

    SymmetryReport rep;
    for (int i = 0; i < n && rep.ok; ++i) {
        for (int j = i + 1; j < n && rep.ok; ++j) {
            bool interchangeable = true;
            for (std::uint64_t s = 0; s < u.size() && interchangeable; ++s) {
                if (s & ((1ULL << i) | (1ULL << j))) continue;
                if (u[s | (1ULL << i)] != u[s | (1ULL << j)]) interchangeable = false;
            }
            if (interchangeable && std::abs(scores.scores[i] - scores.scores[j]) > tol) {
                rep.ok = false;
                rep.i = i;
                rep.j = j;
                rep.diff = std::abs(scores.scores[i] - scores.scores[j]);
            }
        }
    }
    return rep;
}

}  // namespace sift
