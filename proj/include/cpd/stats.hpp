#pragma once

#include <cstdint>
#include <vector>

#include "cpd/grid.hpp"

namespace cpd {

// p x n observation matrix with per-coordinate temporal prefix sums.
// prefix(i, c) = sum of the first c observations of coordinate i, so segment
// sums are two lookups and a subtraction.
class TimeSeries {
  public:
    TimeSeries(int p, int n, std::vector<double> data);  // data row-major p x n

    int p() const { return p_; }
    int n() const { return n_; }
    double at(int coord, int t) const { return data_[coord * n_ + t - 1]; }  // t in [1, n]
    // Sum of y_i over times [a, b], 1-based inclusive.
    double segment_sum(int coord, int a, int b) const {
        return prefix_[coord * (n_ + 1) + b] - prefix_[coord * (n_ + 1) + a - 1];
    }
    const std::vector<double>& raw() const { return data_; }

  private:
    int p_;
    int n_;
    std::vector<double> data_;
    std::vector<double> prefix_;  // p x (n+1)
};

// CUSUM vector at one grid point, one entry per coordinate.
struct CusumVector {
    std::vector<double> values;
    GridPoint point;
    double sigma = 1.0;
};

CusumVector cusum(const TimeSeries& series, GridPoint point, double sigma);

// ||C||^2 - p
double dense_stat(const CusumVector& c);

// Sum of the s largest squared entries of C.
double partial_norm(const CusumVector& c, int s);

// Sorted squared magnitudes, largest first, with a running prefix sum: lets a
// caller evaluate partial_norm at every dyadic sparsity from one sort.
std::vector<double> partial_norm_profile(const CusumVector& c);

// N = #{i : |C_i| > x}
int exceed_count(const CusumVector& c, int x);

// Exceedance counts for every integer threshold x in [1, xmax], one pass.
std::vector<int> exceed_counts_upto(const CusumVector& c, int xmax);

// P(Z > x) for standard normal Z.
double gauss_upper_tail(double x);

struct BinomialSpec {
    int trials = 0;
    double success_prob = 0.0;
};

// Exact P(B > u) for B ~ Binomial(trials, success_prob).
double binom_upper_tail(double u, const BinomialSpec& spec);

// Smallest integer u >= 0 with P(B > u) <= alpha.
int binom_inverse_tail(double alpha, const BinomialSpec& spec);

}  // namespace cpd
