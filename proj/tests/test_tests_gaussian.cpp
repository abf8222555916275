#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cpd/tests_gaussian.hpp"

using namespace cpd;

namespace {

GaussianTestConfig config_for(int n, int p, double delta) {
    GaussianTestConfig cfg;
    cfg.n = n;
    cfg.p = p;
    cfg.sigma = 1.0;
    cfg.delta = delta;
    cfg.grid = build_dyadic_grid(n);
    return cfg;
}

CusumVector vec(std::vector<double> values, int r = 1) {
    return {std::move(values), {r + 1, r}, 1.0};
}

}  // namespace

TEST_CASE("dense threshold formula") {
    GaussianTestConfig cfg = config_for(16, 4, 1.0);
    CHECK(dense_threshold(cfg, 2) == doctest::Approx(24.41).epsilon(1e-3));

    cfg = config_for(256, 8, 0.1);
    double prev = 1e300;
    for (int r : cfg.grid.scales) {
        double t = dense_threshold(cfg, r);
        CHECK(t < prev);
        prev = t;
    }

    GaussianTestConfig p0 = config_for(64, 0, 0.5);
    CHECK(dense_threshold(p0, 1) ==
          doctest::Approx(4.0 * std::log(2.0 * 64 / 0.5)).epsilon(1e-12));
}

TEST_CASE("berk-jones weights") {
    GaussianTestConfig cfg = config_for(64, 4, 0.2);
    for (int r : cfg.grid.scales) {
        double w1 = berk_jones_weight(cfg, 1, r);
        CHECK(berk_jones_weight(cfg, 2, r) == doctest::Approx(w1 / 4.0).epsilon(1e-12));
        // closed form: |D_r| * sum_x alpha_{x,r} = delta*r/n
        double per_scale = w1 * cfg.grid.locations_at(r).size() *
                           (std::numbers::pi * std::numbers::pi / 6.0);
        CHECK(per_scale == doctest::Approx(0.2 * r / 64.0).epsilon(1e-12));
    }
    CHECK_THROWS(berk_jones_weight(cfg, 0, 1));
}

TEST_CASE("weight budget stays below delta") {
    // sum over scales, locations and all x >= 1 (zeta(2) closed form)
    for (int n : {8, 16, 32, 64, 128, 256}) {
        for (double delta : {0.01, 0.1, 0.5, 0.9}) {
            GaussianTestConfig cfg = config_for(n, 4, delta);
            double total = 0.0;
            for (int r : cfg.grid.scales)
                total += berk_jones_weight(cfg, 1, r) * cfg.grid.locations_at(r).size() *
                         (std::numbers::pi * std::numbers::pi / 6.0);
            CHECK(total <= delta * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("berk-jones scan bound") {
    GaussianTestConfig cfg = config_for(8, 1, 0.5);
    int x0 = berk_jones_xmax(cfg, 1);
    CHECK(x0 >= 1);
    CHECK(x0 < 20);

    int prev = 0;
    for (int p : {1, 2, 8, 64, 1024}) {
        GaussianTestConfig c = config_for(64, p, 0.1);
        int x = berk_jones_xmax(c, 1);
        CHECK(x >= prev);
        prev = x;
    }

    // at and beyond the scan bound the binomial quantile collapses to zero
    GaussianTestConfig c = config_for(128, 16, 0.1);
    for (int r : c.grid.scales) {
        int xm = berk_jones_xmax(c, r);
        for (int x = xm; x <= xm + 3; ++x) {
            BinomialSpec spec{c.p, 2.0 * gauss_upper_tail(x)};
            CHECK(binom_inverse_tail(berk_jones_weight(c, x, r), spec) == 0);
        }
    }
}

TEST_CASE("partial threshold formula") {
    GaussianTestConfig cfg = config_for(16, 1, 16.0 / (2.0 * std::numbers::e));
    CHECK(partial_threshold(cfg, 2, 1) ==
          doctest::Approx(4.0 * std::log(2.0 * std::numbers::e) + 4.0).epsilon(1e-9));

    GaussianTestConfig big = config_for(256, 64, 0.1);
    double prev = 0.0;
    for (int s : dyadic_sparsities(64)) {
        double t = partial_threshold(big, 4, s);
        CHECK(t > prev);
        prev = t;
    }
    CHECK_THROWS(partial_threshold(big, 4, 3));
}

TEST_CASE("calibration table construction") {
    GaussianTestConfig cfg = config_for(64, 8, 0.1);
    GaussianCalibration cal(cfg);
    for (int r : cfg.grid.scales) {
        CHECK(cal.dense_thresh(r) == doctest::Approx(dense_threshold(cfg, r)));
        CHECK(cal.xmax(r) == berk_jones_xmax(cfg, r));
        for (int x = 1; x <= cal.xmax(r); ++x) CHECK(cal.bj_quantile(r, x) >= 0);
        for (int s : cal.sparsities())
            CHECK(cal.partial_thresh(r, s) == doctest::Approx(partial_threshold(cfg, r, s)));
    }
    std::string j = cal.to_json();
    CHECK(j.find("\"dense_threshold\"") != std::string::npos);
    CHECK(j.find("\"bj_quantiles\"") != std::string::npos);

    GaussianTestConfig bad = cfg;
    bad.delta = 1.5;
    CHECK_THROWS_AS(GaussianCalibration{bad}, std::invalid_argument);
}

TEST_CASE("zero data never fires") {
    GaussianTestConfig cfg = config_for(32, 4, 0.1);
    GaussianCalibration cal(cfg);
    TimeSeries zero(4, 32, std::vector<double>(128, 0.0));
    for (int r : cfg.grid.scales)
        for (int l : cfg.grid.locations_at(r)) {
            TestVerdict v = combined_test(zero, {l, r}, cal);
            CHECK_FALSE(v.fired);
            CHECK(v.source == TestSource::none);
        }
}

TEST_CASE("strong signals fire the right sub-test") {
    GaussianTestConfig cfg = config_for(32, 8, 0.1);
    GaussianCalibration cal(cfg);

    // all-coordinate shift: dense statistic dominates
    std::vector<double> data(8 * 32, 0.0);
    for (int i = 0; i < 8; ++i)
        for (int t = 16; t < 32; ++t) data[i * 32 + t] = 6.0;
    TimeSeries dense_sig(8, 32, std::move(data));
    TestVerdict v = combined_test(dense_sig, {17, 8}, cal);
    CHECK(v.fired);
    CHECK(v.source == TestSource::dense);

    // single-coordinate jump at moderate size: partial or BJ catches it
    std::vector<double> sparse(8 * 32, 0.0);
    for (int t = 16; t < 32; ++t) sparse[0 * 32 + t] = 4.0;
    TimeSeries sparse_sig(8, 32, std::move(sparse));
    TestVerdict w = combined_test(sparse_sig, {17, 8}, cal);
    CHECK(w.fired);

    // count pushed above the binomial quantile by construction
    int xm = cal.xmax(1);
    int q = cal.bj_quantile(1, xm);
    std::vector<double> c(8, 0.0);
    for (int i = 0; i <= q && i < 8; ++i) c[i] = xm + 1.0;
    TestVerdict bj = berk_jones_test(vec(c), cal);
    CHECK(bj.fired);
}

TEST_CASE("berk-jones equals the count oracle when p = 1") {
    GaussianTestConfig cfg = config_for(64, 1, 0.2);
    GaussianCalibration cal(cfg);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> dist(0.0, 2.0);
    for (int r : cfg.grid.scales) {
        // smallest x where the quantile hits zero
        int x_star = 0;
        for (int x = 1; x <= cal.xmax(r); ++x)
            if (cal.bj_quantile(r, x) == 0) {
                x_star = x;
                break;
            }
        REQUIRE(x_star > 0);
        for (int trial = 0; trial < 200; ++trial) {
            double value = dist(rng);
            TestVerdict v = berk_jones_test(vec({value}, r), cal);
            CHECK(v.fired == (std::abs(value) > x_star));
        }
    }
}

TEST_CASE("truncation invariance of the berk-jones scan") {
    GaussianTestConfig cfg = config_for(64, 16, 0.1);
    GaussianCalibration cal(cfg);
    std::mt19937_64 rng(23);
    std::normal_distribution<double> dist(0.0, 1.8);
    for (int trial = 0; trial < 1000; ++trial) {
        int r = cfg.grid.scales[trial % cfg.grid.scales.size()];
        CusumVector c = vec(std::vector<double>(16), r);
        for (auto& v : c.values) v = dist(rng);
        if (trial % 7 == 0) c.values[0] = dist(rng) * 5.0;

        bool fired_short = berk_jones_test(c, cal).fired;
        bool fired_long = false;
        int xm = cal.xmax(r);
        for (int x = 1; x <= 10 * xm; ++x) {
            BinomialSpec spec{cfg.p, 2.0 * gauss_upper_tail(x)};
            int q = binom_inverse_tail(berk_jones_weight(cfg, x, r), spec);
            if (exceed_count(c, x) > q) {
                fired_long = true;
                break;
            }
        }
        CHECK(fired_short == fired_long);
    }
}

TEST_CASE("dense statistic monotone in the mean shift") {
    GaussianTestConfig cfg = config_for(32, 4, 0.1);
    GaussianCalibration cal(cfg);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> dist;
    CusumVector c = vec(std::vector<double>(4));
    for (auto& v : c.values) v = dist(rng);
    double prev = dense_test(c, cal).statistic_value;
    for (int step = 0; step < 5; ++step) {
        for (auto& v : c.values) v += (v >= 0 ? 0.5 : -0.5);
        double cur = dense_test(c, cal).statistic_value;
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("null monte carlo stays under the guarantee") {
    GaussianTestConfig cfg = config_for(64, 8, 0.1);
    GaussianCalibration cal(cfg);
    std::mt19937_64 rng(101);
    std::normal_distribution<double> dist;
    const int runs = 200;
    int any_fired = 0;
    for (int run = 0; run < runs; ++run) {
        std::vector<double> data(8 * 64);
        for (auto& v : data) v = dist(rng);
        TimeSeries ts(8, 64, std::move(data));
        bool fired = false;
        for (int r : cfg.grid.scales) {
            for (int l : cfg.grid.locations_at(r)) {
                if (combined_test(ts, {l, r}, cal).fired) {
                    fired = true;
                    break;
                }
            }
            if (fired) break;
        }
        if (fired) ++any_fired;
    }
    CHECK(static_cast<double>(any_fired) / runs <= 6.0 * cfg.delta);
}
