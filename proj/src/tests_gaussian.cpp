#include "cpd/tests_gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cpd {

std::vector<int> dyadic_sparsities(int p) {
    std::vector<int> z;
    for (int s = 1; s <= p; s *= 2) z.push_back(s);
    return z;
}

double dense_threshold(const GaussianTestConfig& cfg, int r) {
    double lo = std::log(2.0 * cfg.n / (r * cfg.delta));
    return 4.0 * (std::sqrt(cfg.p * lo) + lo);
}

double berk_jones_weight(const GaussianTestConfig& cfg, int x, int r) {
    const auto& locs = cfg.grid.locations_at(r);
    if (x < 1 || locs.empty())
        throw std::invalid_argument("berk_jones_weight: bad x or scale");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 6.0 * cfg.delta * r /
           (pi2 * static_cast<double>(x) * x * static_cast<double>(locs.size()) * cfg.n);
}

int berk_jones_xmax(const GaussianTestConfig& cfg, int r) {
    for (int x = 1;; ++x) {
        if (2.0 * cfg.p * gauss_upper_tail(x) <= berk_jones_weight(cfg, x, r))
            return x;
    }
}

double partial_threshold(const GaussianTestConfig& cfg, int r, int s) {
    auto z = dyadic_sparsities(cfg.p);
    bool in_z = false;
    for (int zz : z) in_z = in_z || (zz == s);
    if (!in_z) throw std::invalid_argument("partial_threshold: s not a dyadic sparsity");
    return 4.0 * s * std::log(2.0 * std::numbers::e * cfg.p / s) +
           4.0 * std::log(cfg.n / (r * cfg.delta));
}

GaussianCalibration::GaussianCalibration(GaussianTestConfig cfg) : cfg_(std::move(cfg)) {
    if (!(cfg_.delta > 0.0 && cfg_.delta < 1.0))
        throw std::invalid_argument("GaussianCalibration: delta must be in (0,1)");
    if (cfg_.sigma <= 0.0)
        throw std::invalid_argument("GaussianCalibration: sigma must be positive");
    sparsities_ = dyadic_sparsities(cfg_.p);
    for (int r : cfg_.grid.scales) {
        ScaleTable table;
        table.dense = dense_threshold(cfg_, r);
        table.xmax = berk_jones_xmax(cfg_, r);
        table.quantiles.resize(table.xmax);
        for (int x = 1; x <= table.xmax; ++x) {
            BinomialSpec spec{cfg_.p, 2.0 * gauss_upper_tail(x)};
            table.quantiles[x - 1] = binom_inverse_tail(berk_jones_weight(cfg_, x, r), spec);
        }
        table.partial.reserve(sparsities_.size());
        for (int s : sparsities_) table.partial.push_back(partial_threshold(cfg_, r, s));
        scales_.emplace(r, std::move(table));
    }
}

double GaussianCalibration::dense_thresh(int r) const { return scales_.at(r).dense; }
int GaussianCalibration::xmax(int r) const { return scales_.at(r).xmax; }

int GaussianCalibration::bj_quantile(int r, int x) const {
    const auto& t = scales_.at(r);
    if (x < 1 || x > t.xmax) throw std::out_of_range("bj_quantile: x out of scan range");
    return t.quantiles[x - 1];
}

double GaussianCalibration::partial_thresh(int r, int s) const {
    const auto& t = scales_.at(r);
    for (std::size_t i = 0; i < sparsities_.size(); ++i)
        if (sparsities_[i] == s) return t.partial[i];
    throw std::invalid_argument("partial_thresh: s not a dyadic sparsity");
}

std::string GaussianCalibration::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = cfg_.n;
    j["p"] = cfg_.p;
    j["sigma"] = cfg_.sigma;
    j["delta"] = cfg_.delta;
    j["sparsities"] = sparsities_;
    nlohmann::ordered_json per_scale = nlohmann::ordered_json::array();
    for (const auto& [r, t] : scales_) {
        nlohmann::ordered_json s;
        s["r"] = r;
        s["dense_threshold"] = t.dense;
        s["x_max"] = t.xmax;
        s["bj_quantiles"] = t.quantiles;
        s["partial_thresholds"] = t.partial;
        per_scale.push_back(std::move(s));
    }
    j["scales"] = per_scale;
    return j.dump(2);
}

TestVerdict dense_test(const CusumVector& c, const GaussianCalibration& cal) {
    TestVerdict v;
    v.statistic_value = dense_stat(c);
    v.threshold = cal.dense_thresh(c.point.r);
    v.fired = v.statistic_value > v.threshold;
    v.source = v.fired ? TestSource::dense : TestSource::none;
    return v;
}

TestVerdict berk_jones_test(const CusumVector& c, const GaussianCalibration& cal) {
    TestVerdict v;
    const int r = c.point.r;
    const int xmax = cal.xmax(r);
    auto counts = exceed_counts_upto(c, xmax);
    for (int x = 1; x <= xmax; ++x) {
        int quantile = cal.bj_quantile(r, x);
        if (counts[x] > quantile) {
            v.fired = true;
            v.source = TestSource::berk_jones;
            v.statistic_value = counts[x];
            v.threshold = quantile;
            return v;
        }
    }
    return v;
}

TestVerdict partial_test(const CusumVector& c, const GaussianCalibration& cal) {
    TestVerdict v;
    auto profile = partial_norm_profile(c);
    for (int s : cal.sparsities()) {
        double stat = profile[s - 1];
        double thresh = cal.partial_thresh(c.point.r, s);
        if (stat > thresh) {
            v.fired = true;
            v.source = TestSource::partial;
            v.statistic_value = stat;
            v.threshold = thresh;
            return v;
        }
    }
    return v;
}

TestVerdict combined_test(const CusumVector& c, const GaussianCalibration& cal) {
    if (auto v = dense_test(c, cal); v.fired) return v;
    if (auto v = berk_jones_test(c, cal); v.fired) return v;
    if (auto v = partial_test(c, cal); v.fired) return v;
    return {};
}

TestVerdict dense_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal) {
    return dense_test(cusum(series, point, cal.config().sigma), cal);
}
TestVerdict berk_jones_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal) {
    return berk_jones_test(cusum(series, point, cal.config().sigma), cal);
}
TestVerdict partial_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal) {
    return partial_test(cusum(series, point, cal.config().sigma), cal);
}
TestVerdict combined_test(const TimeSeries& series, GridPoint point, const GaussianCalibration& cal) {
    return combined_test(cusum(series, point, cal.config().sigma), cal);
}

}  // namespace cpd
