#include "cpd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace cpd {

TimeSeries::TimeSeries(int p, int n, std::vector<double> data)
    : p_(p), n_(n), data_(std::move(data)) {
    if (p_ < 1 || n_ < 1)
        throw std::invalid_argument("TimeSeries: dimensions must be positive");
    if (data_.size() != static_cast<std::size_t>(p_) * n_)
        throw std::invalid_argument("TimeSeries: data size mismatch");
    prefix_.assign(static_cast<std::size_t>(p_) * (n_ + 1), 0.0);
    for (int i = 0; i < p_; ++i) {
        double acc = 0.0;
        for (int t = 0; t < n_; ++t) {
            acc += data_[static_cast<std::size_t>(i) * n_ + t];
            prefix_[static_cast<std::size_t>(i) * (n_ + 1) + t + 1] = acc;
        }
    }
}

CusumVector cusum(const TimeSeries& series, GridPoint point, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("cusum: sigma must be positive");
    if (!point.valid_for(series.n()))
        throw std::out_of_range("cusum: grid point outside series");
    const int l = point.l;
    const int r = point.r;
    const double scale = std::sqrt(r / (2.0 * sigma * sigma)) / r;
    CusumVector c;
    c.point = point;
    c.sigma = sigma;
    c.values.resize(series.p());
    for (int i = 0; i < series.p(); ++i) {
        double right = series.segment_sum(i, l, l + r - 1);
        double left = series.segment_sum(i, l - r, l - 1);
        c.values[i] = scale * (right - left);
    }
    return c;
}

double dense_stat(const CusumVector& c) {
    double ss = 0.0;
    for (double v : c.values) ss += v * v;
    return ss - static_cast<double>(c.values.size());
}

double partial_norm(const CusumVector& c, int s) {
    const int p = static_cast<int>(c.values.size());
    if (s < 1 || s > p) throw std::invalid_argument("partial_norm: s out of range");
    std::vector<double> sq(c.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = c.values[i] * c.values[i];
    std::nth_element(sq.begin(), sq.begin() + (s - 1), sq.end(), std::greater<>());
    // Sum largest-first so the result is bitwise identical to a sorted oracle.
    std::sort(sq.begin(), sq.begin() + s, std::greater<>());
    double sum = 0.0;
    for (int i = 0; i < s; ++i) sum += sq[i];
    return sum;
}

std::vector<double> partial_norm_profile(const CusumVector& c) {
    std::vector<double> sq(c.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = c.values[i] * c.values[i];
    std::sort(sq.begin(), sq.end(), std::greater<>());
    for (std::size_t i = 1; i < sq.size(); ++i) sq[i] += sq[i - 1];
    return sq;  // sq[s-1] = partial_norm(c, s)
}

int exceed_count(const CusumVector& c, int x) {
    if (x < 1) throw std::invalid_argument("exceed_count: x must be >= 1");
    int count = 0;
    for (double v : c.values)
        if (std::abs(v) > x) ++count;
    return count;
}

std::vector<int> exceed_counts_upto(const CusumVector& c, int xmax) {
    // For a = |C_i|, the integer thresholds x with a > x are x <= m where
    // m = floor(a) if a is non-integral, a - 1 otherwise.  Histogram the m
    // values and suffix-sum.
    std::vector<int> hist(xmax + 1, 0);
    for (double v : c.values) {
        double a = std::abs(v);
        double fl = std::floor(a);
        int m = static_cast<int>(fl) - (a == fl ? 1 : 0);
        m = std::min(m, xmax);
        if (m >= 1) ++hist[m];
    }
    std::vector<int> counts(xmax + 1, 0);
    for (int x = xmax; x >= 1; --x)
        counts[x] = hist[x] + (x == xmax ? 0 : counts[x + 1]);
    return counts;  // counts[x] = #{|C_i| > x}, x in [1, xmax]; counts[0] unused
}

double gauss_upper_tail(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

namespace {

double log_binom_coeff(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log P(B = k), stable for extreme q.
double log_binom_pmf(int k, int n, double q) {
    if (q <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (q >= 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    return log_binom_coeff(n, k) + k * std::log(q) + (n - k) * std::log1p(-q);
}

}  // namespace

double binom_upper_tail(double u, const BinomialSpec& spec) {
    if (spec.trials < 0) throw std::invalid_argument("binom_upper_tail: trials < 0");
    if (u < 0.0) return 1.0;
    if (u >= spec.trials) return 0.0;
    const int n = spec.trials;
    const double q = spec.success_prob;
    const int k0 = static_cast<int>(std::floor(u)) + 1;  // smallest k with k > u
    // Sum the smaller side in log space.
    double mean = n * q;
    if (k0 > mean) {
        // accumulate P(B >= k0) upward
        double log_max = -std::numeric_limits<double>::infinity();
        std::vector<double> terms;
        terms.reserve(n - k0 + 1);
        for (int k = k0; k <= n; ++k) {
            double lt = log_binom_pmf(k, n, q);
            terms.push_back(lt);
            log_max = std::max(log_max, lt);
        }
        if (!std::isfinite(log_max)) return 0.0;
        double acc = 0.0;
        for (double lt : terms) acc += std::exp(lt - log_max);
        double result = std::exp(log_max) * acc;
        return std::min(result, 1.0);
    }
    // complement: 1 - P(B <= k0 - 1)
    double acc = 0.0;
    for (int k = 0; k < k0; ++k) acc += std::exp(log_binom_pmf(k, n, q));
    return std::clamp(1.0 - acc, 0.0, 1.0);
}

int binom_inverse_tail(double alpha, const BinomialSpec& spec) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("binom_inverse_tail: alpha must be in (0,1]");
    if (spec.success_prob <= 0.0) return 0;
    for (int u = 0; u <= spec.trials; ++u)
        if (binom_upper_tail(u, spec) <= alpha) return u;
    return spec.trials;
}

}  // namespace cpd
