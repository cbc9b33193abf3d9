#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sift/domination.hpp"
#include "sift/errors.hpp"
#include "sift/least_core.hpp"
#include "sift/subsets.hpp"
#include "sift/utility.hpp"
#include "sift/valuation.hpp"

TEST_CASE("domination_count counts weakly dominated subsets") {
    // Additive weights 1..4: utility of a pair = w_i + w_j.
    sift::TabularUtility game(4);
    for (std::uint64_t bits = 0; bits < 16; ++bits) {
        double v = 0.0;
        for (int i = 0; i < 4; ++i)
            if (bits >> i & 1) v += i + 1.0;
        game.set_entry(sift::SubsetMask::from_bits(4, bits), v);
    }
    // {0,1} has utility 3, the unique minimum among pairs: d = 1.
    auto rep = sift::domination_count(game, sift::SubsetMask(4, {0, 1}), 2);
    CHECK(rep.dominated == 1);
    CHECK(rep.total == 6);
    CHECK(rep.is_unique_worst);
    CHECK(rep.selected_utility == 3.0);
    // {2,3} has utility 7, the maximum: every pair is weakly dominated.
    rep = sift::domination_count(game, sift::SubsetMask(4, {2, 3}), 2);
    CHECK(rep.dominated == 6);
    CHECK(!rep.is_unique_worst);
    // Selection size must match k.
    CHECK_THROWS_AS(sift::domination_count(game, sift::SubsetMask(4, {0}), 2), sift::ConfigError);
    // Scores overload routes through linear_select.
    sift::ScoreVector sv;
    sv.method = "m";
    sv.n = 4;
    sv.scores = {9.0, 8.0, 1.0, 2.0};
    rep = sift::domination_count(game, sv, 2);
    CHECK(rep.selected.members() == std::vector<int>{0, 1});
    CHECK(rep.dominated == 1);
}

TEST_CASE("counterexample game: no heuristic tops both sizes; pair bound when first pick is 0") {
    const auto game = sift::build_thm1_instance();
    // The exhaustive best subsets: k=1 -> {0} (7); k=2 -> {1,2} (10).
    // A score vector wins at k=1 only by ranking point 0 first, but then its
    // k=2 pick contains 0 and scores at most 9 < 10.
    const auto shapley = sift::exact_shapley(game);
    const auto d1 = sift::domination_count(game, shapley, 1);
    const auto d2 = sift::domination_count(game, shapley, 2);
    CHECK(d1.dominated == 3);  // {0} beats all singletons
    CHECK(d2.dominated == 2);  // {1,2} beats the pick, so d < 3
    CHECK(!(d1.dominated == 3 && d2.dominated == 3));

    const auto loo_scores = sift::loo(game);
    const auto l1 = sift::domination_count(game, loo_scores, 1);
    const auto l2 = sift::domination_count(game, loo_scores, 2);
    CHECK(l1.selected.members() == std::vector<int>{1});
    CHECK(l1.dominated == 2);
    CHECK(l2.dominated == 3);
    CHECK(!(l1.dominated == 3 && l2.dominated == 3));

    // Least core also falls: symmetric in points 1 and 2, so its k=1 pick is
    // either 0 (then k=2 fails) or 1 (then k=1 fails).
    const auto lc = sift::least_core_scores(game);
    const auto c1 = sift::domination_count(game, lc, 1);
    const auto c2 = sift::domination_count(game, lc, 2);
    CHECK(!(c1.dominated == 3 && c2.dominated == 3));
}

TEST_CASE("type-block game: structure, symmetry, zero-utility selections") {
    for (const auto& [n, c] : std::vector<std::pair<int, int>>{{6, 3}, {8, 3}, {9, 4}, {10, 2}, {6, 6}}) {
        CAPTURE(n);
        CAPTURE(c);
        const auto inst = sift::build_thm2_instance(n, c);
        CHECK(inst.c == c);
        CHECK(inst.r == n % c);
        REQUIRE(static_cast<int>(inst.type_of.size()) == n);
        // Type sizes: first c-r blocks floor(n/c), last r blocks ceil.
        std::vector<int> count(c, 0);
        for (int t : inst.type_of) ++count[t];
        const int lo = n / c;
        for (int t = 0; t < c; ++t) CHECK(count[t] == (t < c - inst.r ? lo : lo + 1));
        // Values: single-type subsets of size <= lo score 0, everything else
        // nonempty scores 1.
        const auto& game = inst.game;
        for (std::uint64_t bits = 1; bits < (1ULL << n); ++bits) {
            const auto mask = sift::SubsetMask::from_bits(n, bits);
            int first_type = inst.type_of[mask.members().front()];
            bool single = true;
            for (int i : mask.members()) single = single && inst.type_of[i] == first_type;
            const double want = (single && mask.size() <= lo) ? 0.0 : 1.0;
            CHECK(game.eval(mask) == want);
        }
        CHECK(game.eval(sift::SubsetMask(n, {})) == 0.0);
        // Shapley is constant within a type.
        const auto sv = sift::exact_shapley(game);
        CHECK(sift::verify_symmetry(sv, game, 1e-9).ok);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (inst.type_of[i] == inst.type_of[j]) CHECK(std::abs(sv.scores[i] - sv.scores[j]) <= 1e-9);
        // Top-k selections land inside one type block and score 0 for k <= lo.
        for (int k = 1; k <= lo; ++k) {
            const auto rep = sift::domination_count(game, sv, k);
            CHECK(rep.selected_utility == 0.0);
            const std::uint64_t bound = (c - inst.r) * sift::binom(lo, k) + inst.r * sift::binom(lo + 1, k);
            CHECK(rep.dominated <= bound);
        }
    }
    CHECK_THROWS_AS(sift::build_thm2_instance(6, 1), sift::ConfigError);
    CHECK_THROWS_AS(sift::build_thm2_instance(6, 7), sift::ConfigError);
}

TEST_CASE("worst-pick game: structure and closed forms across the size grid") {
    for (int n = 4; n <= 9; ++n) {
        for (int k = 1; k <= n - 1; ++k) {
            CAPTURE(n);
            CAPTURE(k);
            const auto rep = sift::verify_closed_form_shapley(n, k, 1e-9);
            CHECK(rep.ok);
            CHECK(rep.max_abs_err <= 1e-9);
            CHECK(rep.gap > 0.0);
            CHECK(rep.gap >= rep.gap_bound - 1e-9);
            CHECK(rep.gap_bound == doctest::Approx(2.0 / (n * (n - 1.0))));
            // The closed forms say the first k points score higher.
            for (int i = 0; i < k; ++i) CHECK(rep.closed_form[i] > rep.closed_form[k]);
        }
    }
}

TEST_CASE("worst-pick game for k=1 gives the first point value 12/n") {
    for (int n = 4; n <= 9; ++n) {
        const auto rep = sift::verify_closed_form_shapley(n, 1, 1e-9);
        CHECK(rep.shapley[0] == doctest::Approx(12.0 / n).epsilon(1e-9));
    }
}

TEST_CASE("worst-pick game is monotone and submodular with a unique worst selection") {
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{{5, 2}, {6, 3}, {7, 1}, {8, 4}}) {
        CAPTURE(n);
        CAPTURE(k);
        const auto game = sift::build_thm3_instance(n, k);
        CHECK(sift::check_monotone(game).holds);
        CHECK(sift::check_submodular(game).holds);
        const auto sv = sift::exact_shapley(game);
        const auto pick = sift::linear_select(sv, k);
        std::vector<int> want(k);
        for (int i = 0; i < k; ++i) want[i] = i;
        CHECK(pick.members() == want);
        const auto rep = sift::domination_count(game, pick, k);
        CHECK(rep.dominated == 1);
        CHECK(rep.is_unique_worst);
    }
}

TEST_CASE("symmetry checker flags asymmetric scores") {
    const auto inst = sift::build_thm2_instance(6, 3);
    sift::ScoreVector bad;
    bad.method = "bad";
    bad.n = 6;
    bad.scores = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};  // breaks within-type equality
    const auto rep = sift::verify_symmetry(bad, inst.game, 1e-9);
    CHECK(!rep.ok);
    CHECK(rep.i >= 0);
    CHECK(rep.j > rep.i);
    CHECK(inst.type_of[rep.i] == inst.type_of[rep.j]);
    CHECK(rep.diff > 1e-9);
}

TEST_CASE("domination capacity checks") {
    sift::TabularUtility game(4);
    game.set_default(sift::TabularUtility::DefaultKind::constant, {0.0});
    CHECK_THROWS_AS(sift::domination_count(game, sift::SubsetMask(5, {0, 1}), 2), sift::ConfigError);
}
