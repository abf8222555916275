#include "cpd/detect.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cpd {

Grid make_grid(const DetectConfig& cfg) {
    switch (cfg.grid_kind) {
        case GridKind::dyadic:
            return build_dyadic_grid(cfg.n);
        case GridKind::adic:
            return build_adic_grid(cfg.n, cfg.adic_ratio);
        default:
            return build_complete_grid(cfg.n);
    }
}

namespace {

template <typename Verdict>
TestOutcomeMap run_tests(const TimeSeries& series, const Grid& grid, int threads,
                         const Verdict& verdict) {
    std::vector<GridPoint> points;
    for (int r : grid.scales)
        for (int l : grid.locations_at(r)) points.push_back({l, r});

    std::vector<char> fired(points.size(), 0);
    auto work = [&](std::size_t i) { fired[i] = verdict(points[i]) ? 1 : 0; };
    if (threads <= 1 || points.size() < 2) {
        for (std::size_t i = 0; i < points.size(); ++i) work(i);
    } else {
        const int workers =
            static_cast<int>(std::min<std::size_t>(threads, points.size()));
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < points.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& t : pool) t.join();
    }

    TestOutcomeMap out;
    out.grid = grid;
    for (std::size_t i = 0; i < points.size(); ++i)
        out.verdicts[points[i]] = fired[i] != 0;
    return out;
}

}  // namespace

TestOutcomeMap evaluate_tests(const TimeSeries& series, const DetectConfig& cfg) {
    if (series.n() != cfg.n || series.p() != cfg.p)
        throw std::invalid_argument("evaluate_tests: series shape does not match config");
    Grid grid = make_grid(cfg);
    if (cfg.regime == NoiseRegime::gaussian) {
        GaussianCalibration cal({cfg.n, cfg.p, cfg.sigma, cfg.delta, grid});
        return run_tests(series, grid, cfg.threads, [&](GridPoint pt) {
            return combined_test(series, pt, cal).fired;
        });
    }
    SubGaussianCalibration cal(
        {cfg.n, cfg.p, cfg.sigma, cfg.delta, cfg.L, cfg.c_dense, cfg.c_partial, grid});
    return run_tests(series, grid, cfg.threads, [&](GridPoint pt) {
        return sg_combined_test(series, pt, cal).fired;
    });
}

Segmentation detect(const TimeSeries& series, const DetectConfig& cfg) {
    TestOutcomeMap outcomes = evaluate_tests(series, cfg);
    return cfg.aggregation == AggregationVariant::merge ? aggregate_v1(outcomes)
                                                        : aggregate_v2(outcomes);
}

std::string calibration_json(const DetectConfig& cfg) {
    Grid grid = make_grid(cfg);
    if (cfg.regime == NoiseRegime::gaussian)
        return GaussianCalibration({cfg.n, cfg.p, cfg.sigma, cfg.delta, grid}).to_json();
    return SubGaussianCalibration(
               {cfg.n, cfg.p, cfg.sigma, cfg.delta, cfg.L, cfg.c_dense, cfg.c_partial, grid})
        .to_json();
}

}  // namespace cpd
