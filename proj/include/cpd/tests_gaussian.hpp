#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpd/grid.hpp"
#include "cpd/stats.hpp"
#include "cpd/verdict.hpp"

namespace cpd {

struct GaussianTestConfig {
    int n = 0;
    int p = 0;
    double sigma = 1.0;
    double delta = 0.1;  // in (0, 1)
    Grid grid;           // dyadic by default
};

double dense_threshold(const GaussianTestConfig& cfg, int r);
double berk_jones_weight(const GaussianTestConfig& cfg, int x, int r);
int berk_jones_xmax(const GaussianTestConfig& cfg, int r);
double partial_threshold(const GaussianTestConfig& cfg, int r, int s);

// Dyadic sparsity set {1, 2, 4, ..., 2^floor(log2 p)}.
std::vector<int> dyadic_sparsities(int p);

// Per-config read-only tables: dense thresholds, Berk-Jones scan bounds and
// binomial quantiles, partial-norm thresholds.  Built once, shared by all
// grid points (the quantiles depend on (x, r) only, not on l).
class GaussianCalibration {
  public:
    explicit GaussianCalibration(GaussianTestConfig cfg);

    const GaussianTestConfig& config() const { return cfg_; }
    double dense_thresh(int r) const;
    int xmax(int r) const;
    // Quantile Q^{-1}(alpha_{x,r}, p, 2*Phibar(x)) for x in [1, xmax(r)].
    int bj_quantile(int r, int x) const;
    const std::vector<int>& sparsities() const { return sparsities_; }
    double partial_thresh(int r, int s) const;

    std::string to_json() const;

  private:
    GaussianTestConfig cfg_;
    std::vector<int> sparsities_;
    struct ScaleTable {
        double dense = 0.0;
        int xmax = 0;
        std::vector<int> quantiles;        // index x-1
        std::vector<double> partial;       // aligned with sparsities_
    };
    std::map<int, ScaleTable> scales_;
};

TestVerdict dense_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal);
TestVerdict berk_jones_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal);
TestVerdict partial_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal);
// Disjunction, short-circuiting in order dense -> Berk-Jones -> partial.
TestVerdict combined_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal);

// Same tests evaluated from an already-computed CUSUM vector.
TestVerdict dense_test(const CusumVector& c, const GaussianCalibration& cal);
TestVerdict berk_jones_test(const CusumVector& c, const GaussianCalibration& cal);
TestVerdict partial_test(const CusumVector& c, const GaussianCalibration& cal);
TestVerdict combined_test(const CusumVector& c, const GaussianCalibration& cal);

}  // namespace cpd
