#pragma once

#include <functional>
#include <string>

#include "cpd/aggregation.hpp"
#include "cpd/grid.hpp"
#include "cpd/stats.hpp"
#include "cpd/tests_gaussian.hpp"
#include "cpd/tests_subgaussian.hpp"

namespace cpd {

enum class NoiseRegime { gaussian, subgaussian };
enum class AggregationVariant { merge, first_keep };

struct DetectConfig {
    int n = 0;
    int p = 0;
    double sigma = 1.0;
    double delta = 0.1;
    NoiseRegime regime = NoiseRegime::gaussian;
    double L = 0.0;  // sub-Gaussian psi_2 bound; <= 0 means sigma*sqrt(8/3)
    double c_dense = 4.0;
    double c_partial = 4.0;
    GridKind grid_kind = GridKind::dyadic;
    double adic_ratio = 0.5;
    AggregationVariant aggregation = AggregationVariant::merge;
    int threads = 1;
};

Grid make_grid(const DetectConfig& cfg);

// Evaluates the combined test at every grid point (parallel over points) and
// returns the verdict map.
TestOutcomeMap evaluate_tests(const TimeSeries& series, const DetectConfig& cfg);

// Full pipeline: tests on the grid, then aggregation.
Segmentation detect(const TimeSeries& series, const DetectConfig& cfg);

// Serialized calibration table for the configured regime.
std::string calibration_json(const DetectConfig& cfg);

}  // namespace cpd
