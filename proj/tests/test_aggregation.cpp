#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "cpd/aggregation.hpp"
#include "cpd/grid.hpp"

using namespace cpd;

namespace {

TestOutcomeMap quiet_map(Grid grid) {
    TestOutcomeMap out;
    out.grid = std::move(grid);
    for (int r : out.grid.scales)
        for (int l : out.grid.locations_at(r)) out.verdicts[{l, r}] = false;
    return out;
}

// Integer-set re-implementation of the two sweeps, no interval arithmetic.
std::vector<SegComponent> oracle_components(const TestOutcomeMap& outcomes,
                                            bool merge_same_scale) {
    std::set<int> admitted_points;
    std::vector<std::pair<int, int>> admitted;
    for (int r : outcomes.grid.scales) {
        std::set<int> scale_points;
        std::vector<std::pair<int, int>> scale_intervals;
        for (int l : outcomes.grid.locations_at(r)) {
            if (!outcomes.fired({l, r})) continue;
            bool clash = false;
            for (int t = l - r + 1; t <= l + r - 1; ++t)
                if (admitted_points.count(t) ||
                    (!merge_same_scale && scale_points.count(t)))
                    clash = true;
            if (clash) continue;
            for (int t = l - r + 1; t <= l + r - 1; ++t) scale_points.insert(t);
            scale_intervals.emplace_back(l - r + 1, l + r - 1);
        }
        admitted_points.insert(scale_points.begin(), scale_points.end());
        admitted.insert(admitted.end(), scale_intervals.begin(), scale_intervals.end());
    }
    // fixpoint merge of any two intervals sharing a point (adjacent closed
    // intervals with a gap of one integer stay separate)
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t i = 0; i < admitted.size() && !merged; ++i)
            for (std::size_t j = i + 1; j < admitted.size() && !merged; ++j)
                if (admitted[i].first <= admitted[j].second &&
                    admitted[j].first <= admitted[i].second) {
                    admitted[i] = {std::min(admitted[i].first, admitted[j].first),
                                   std::max(admitted[i].second, admitted[j].second)};
                    admitted.erase(admitted.begin() + j);
                    merged = true;
                }
    }
    std::sort(admitted.begin(), admitted.end());
    std::vector<SegComponent> comps;
    for (const auto& [lo, hi] : admitted) comps.push_back({lo, hi, {}});
    return comps;
}

}  // namespace

TEST_CASE("empty outcomes give an empty segmentation") {
    TestOutcomeMap out = quiet_map(build_dyadic_grid(16));
    CHECK(aggregate_v1(out).K_hat() == 0);
    CHECK(aggregate_v2(out).K_hat() == 0);
}

TEST_CASE("same-scale overlap: merge vs first-keep") {
    TestOutcomeMap out = quiet_map(build_dyadic_grid(16));
    out.set({4, 2}, true);
    out.set({6, 2}, true);

    Segmentation v1 = aggregate_v1(out);
    REQUIRE(v1.K_hat() == 1);
    CHECK(v1.components[0].lo == 3);
    CHECK(v1.components[0].hi == 7);
    CHECK(v1.components[0].tau() == doctest::Approx(5.0));

    Segmentation v2 = aggregate_v2(out);
    REQUIRE(v2.K_hat() == 1);
    CHECK(v2.components[0].lo == 3);
    CHECK(v2.components[0].hi == 5);
    CHECK(v2.components[0].tau() == doctest::Approx(4.0));
}

TEST_CASE("smaller scale shields a larger one") {
    TestOutcomeMap out = quiet_map(build_dyadic_grid(16));
    out.set({5, 1}, true);
    out.set({6, 2}, true);

    for (const Segmentation& seg : {aggregate_v1(out), aggregate_v2(out)}) {
        REQUIRE(seg.K_hat() == 1);
        CHECK(seg.changepoints() == std::vector<double>{5.0});
        CHECK(seg.components[0].scales == std::vector<int>{1});
    }
}

TEST_CASE("single firing: both variants agree") {
    TestOutcomeMap out = quiet_map(build_dyadic_grid(32));
    out.set({9, 4}, true);
    Segmentation v1 = aggregate_v1(out), v2 = aggregate_v2(out);
    REQUIRE(v1.K_hat() == 1);
    CHECK(v1.components[0].lo == 6);
    CHECK(v1.components[0].hi == 12);
    CHECK(v1.components[0].lo == v2.components[0].lo);
    CHECK(v1.components[0].hi == v2.components[0].hi);
}

TEST_CASE("midpoint arithmetic") {
    SegComponent even{3, 7, {1}};
    CHECK(even.tau() == doctest::Approx(5.0));
    CHECK(even.tau_int() == 5);
    SegComponent half{3, 6, {1}};
    CHECK(half.tau() == doctest::Approx(4.5));
    CHECK(half.tau_int() == 4);  // halves round down
    CHECK(half.tau2() == 9);
}

TEST_CASE("segmentation JSON shape") {
    TestOutcomeMap out = quiet_map(build_dyadic_grid(16));
    out.set({4, 2}, true);
    std::string j = aggregate_v1(out).to_json();
    CHECK(j.find("\"K_hat\": 1") != std::string::npos);
    CHECK(j.find("\"tau\"") != std::string::npos);
    CHECK(j.find("\"tau_int\"") != std::string::npos);
    CHECK(j.find("\"interval\"") != std::string::npos);
    CHECK(j.find("\"scales\"") != std::string::npos);

    CHECK_THROWS(out.set({6, 4}, true));  // not on the scale-4 half-step lattice
}

TEST_CASE("random outcomes match the integer-set oracle") {
    std::mt19937_64 rng(13);
    for (int n : {8, 16, 32, 64}) {
        for (int grid_kind = 0; grid_kind < 2; ++grid_kind) {
            Grid grid = grid_kind == 0 ? build_dyadic_grid(n) : build_complete_grid(n);
            for (int trial = 0; trial < 40; ++trial) {
                double rate = trial % 2 == 0 ? 0.05 : 0.2;
                TestOutcomeMap out = quiet_map(grid);
                std::bernoulli_distribution fire(rate);
                for (auto& [pt, v] : out.verdicts) v = fire(rng);

                auto check_against = [&](const Segmentation& got,
                                         const std::vector<SegComponent>& want) {
                    REQUIRE(got.K_hat() == static_cast<int>(want.size()));
                    for (int i = 0; i < got.K_hat(); ++i) {
                        CHECK(got.components[i].lo == want[i].lo);
                        CHECK(got.components[i].hi == want[i].hi);
                        if (i > 0) CHECK(got.components[i - 1].hi < got.components[i].lo);
                    }
                };
                check_against(aggregate_v1(out), oracle_components(out, true));
                check_against(aggregate_v2(out), oracle_components(out, false));
            }
        }
    }
}

TEST_CASE("variants agree when firing intervals are pairwise disjoint") {
    std::mt19937_64 rng(29);
    Grid grid = build_complete_grid(48);
    for (int trial = 0; trial < 30; ++trial) {
        TestOutcomeMap out = quiet_map(grid);
        std::set<std::pair<int, int>> taken;
        std::uniform_int_distribution<std::size_t> pick_scale(0, grid.scales.size() - 1);
        for (int tries = 0; tries < 20; ++tries) {
            int r = grid.scales[pick_scale(rng)];
            const auto& locs = grid.locations_at(r);
            int l = locs[rng() % locs.size()];
            bool overlap = false;
            for (const auto& [a, b] : taken)
                if (l - r + 1 <= b && a <= l + r - 1) overlap = true;
            if (overlap) continue;
            taken.insert({l - r + 1, l + r - 1});
            out.verdicts[{l, r}] = true;
        }
        Segmentation v1 = aggregate_v1(out), v2 = aggregate_v2(out);
        REQUIRE(v1.K_hat() == v2.K_hat());
        for (int i = 0; i < v1.K_hat(); ++i) {
            CHECK(v1.components[i].lo == v2.components[i].lo);
            CHECK(v1.components[i].hi == v2.components[i].hi);
        }
    }
}

TEST_CASE("dropping the largest scale never disturbs lower components") {
    std::mt19937_64 rng(41);
    Grid grid = build_dyadic_grid(64);
    for (int trial = 0; trial < 30; ++trial) {
        TestOutcomeMap out = quiet_map(grid);
        std::bernoulli_distribution fire(0.15);
        for (auto& [pt, v] : out.verdicts) v = fire(rng);

        TestOutcomeMap reduced = out;
        int rmax = grid.scales.back();
        for (auto& [pt, v] : reduced.verdicts)
            if (pt.r == rmax) v = false;

        Segmentation full = aggregate_v1(out), low = aggregate_v1(reduced);
        for (const auto& c : low.components) {
            bool present = false;
            for (const auto& f : full.components)
                present = present || (f.lo == c.lo && f.hi == c.hi);
            CHECK(present);
        }
    }
}

TEST_CASE("paired distances") {
    CHECK(hausdorff({2, 5}, {3, 7}) == doctest::Approx(2.0));
    CHECK(wasserstein({2, 5}, {3, 7}) == doctest::Approx(3.0));
    CHECK(hausdorff({1, 2}, {1, 2}) == doctest::Approx(0.0));
    CHECK(wasserstein({}, {}) == doctest::Approx(0.0));
    CHECK(hausdorff({2, 5}, {3, 7}) == doctest::Approx(hausdorff({3, 7}, {2, 5})));
    CHECK_THROWS(hausdorff({1.0}, {1.0, 2.0}));
    CHECK_THROWS(wasserstein({1.0}, {}));
}

TEST_CASE("theorem check: vacuous, detection, adversarial") {
    GroundTruth truth = make_signal(16, 1, {}, {{0.0}});
    TestOutcomeMap quiet = quiet_map(build_dyadic_grid(16));
    Theorem1Report rep = theorem1_check(truth, {}, {}, quiet, aggregate_v1(quiet));
    CHECK(rep.pass);

    GroundTruth one = make_signal(16, 1, {9}, {{0.0}, {1.0}});
    TestOutcomeMap out = quiet_map(build_dyadic_grid(16));
    out.set({9, 2}, true);
    std::map<int, GridPoint> anchors{{1, {9, 2}}};
    rep = theorem1_check(one, {1}, anchors, out, aggregate_v1(out));
    CHECK(rep.pass);

    // false positive far from the change-point: flagged, not thrown
    TestOutcomeMap bad = out;
    bad.set({3, 1}, true);
    rep = theorem1_check(one, {1}, anchors, bad, aggregate_v1(bad));
    CHECK_FALSE(rep.pass);
    CHECK(!rep.violations.empty());

    // anchor violating the scale condition is a precondition error
    std::map<int, GridPoint> far{{1, {9, 4}}};
    TestOutcomeMap big = quiet_map(build_dyadic_grid(16));
    big.set({9, 4}, true);
    CHECK_THROWS_AS(theorem1_check(one, {1}, far, big, aggregate_v1(big)),
                    std::invalid_argument);
}

TEST_CASE("null segment classification") {
    GroundTruth truth = make_signal(32, 1, {17}, {{0.0}, {1.0}});
    CHECK(is_null_segment(truth, {5, 2}));
    CHECK_FALSE(is_null_segment(truth, {17, 2}));
    CHECK_FALSE(is_null_segment(truth, {16, 2}));  // 17 in (14, 18)
    CHECK(is_null_segment(truth, {15, 2}));        // (13, 17) open, excludes 17
}
