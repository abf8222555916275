#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpd/grid.hpp"
#include "cpd/stats.hpp"
#include "cpd/verdict.hpp"

namespace cpd {

struct SubGaussianTestConfig {
    int n = 0;
    int p = 0;
    double sigma = 1.0;
    double delta = 0.1;
    double L = 0.0;         // psi_2 norm bound; default sigma*sqrt(8/3) if <= 0
    double c_dense = 4.0;
    double c_partial = 4.0;
    Grid grid;              // complete by default
};

// psi_2 norm of N(0, sigma^2).
double gaussian_psi2(double sigma);
// psi_2 norm of sigma * Rademacher.
double rademacher_psi2(double sigma);

double sg_dense_threshold(const SubGaussianTestConfig& cfg, int r);
double sg_partial_threshold(const SubGaussianTestConfig& cfg, int r, int s);

class SubGaussianCalibration {
  public:
    explicit SubGaussianCalibration(SubGaussianTestConfig cfg);

    const SubGaussianTestConfig& config() const { return cfg_; }
    double dense_thresh(int r) const;
    const std::vector<int>& sparsities() const { return sparsities_; }
    double partial_thresh(int r, int s) const;

    std::string to_json() const;

  private:
    SubGaussianTestConfig cfg_;
    std::vector<int> sparsities_;
    struct ScaleTable {
        double dense = 0.0;
        std::vector<double> partial;
    };
    std::map<int, ScaleTable> scales_;
};

TestVerdict sg_dense_test(const TimeSeries& series, GridPoint point, const SubGaussianCalibration& cal);
TestVerdict sg_partial_test(const TimeSeries& series, GridPoint point, const SubGaussianCalibration& cal);
TestVerdict sg_combined_test(const TimeSeries& series, GridPoint point, const SubGaussianCalibration& cal);

TestVerdict sg_dense_test(const CusumVector& c, const SubGaussianCalibration& cal);
TestVerdict sg_partial_test(const CusumVector& c, const SubGaussianCalibration& cal);
TestVerdict sg_combined_test(const CusumVector& c, const SubGaussianCalibration& cal);

}  // namespace cpd
