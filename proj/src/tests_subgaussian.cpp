#include "cpd/tests_subgaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cpd/tests_gaussian.hpp"

namespace cpd {

double gaussian_psi2(double sigma) { return sigma * std::sqrt(8.0 / 3.0); }
double rademacher_psi2(double sigma) { return sigma / std::sqrt(std::numbers::ln2); }

namespace {

double effective_L(const SubGaussianTestConfig& cfg) {
    return cfg.L > 0.0 ? cfg.L : gaussian_psi2(cfg.sigma);
}

}  // namespace

double sg_dense_threshold(const SubGaussianTestConfig& cfg, int r) {
    double L = effective_L(cfg);
    double ratio = L * L / (cfg.sigma * cfg.sigma);
    double lo = std::log(cfg.n / (r * cfg.delta));
    return cfg.c_dense * ratio * (std::sqrt(cfg.p * lo) + lo);
}

double sg_partial_threshold(const SubGaussianTestConfig& cfg, int r, int s) {
    bool in_z = false;
    for (int zz : dyadic_sparsities(cfg.p)) in_z = in_z || (zz == s);
    if (!in_z)
        throw std::invalid_argument("sg_partial_threshold: s not a dyadic sparsity");
    double L = effective_L(cfg);
    double ratio = L * L / (cfg.sigma * cfg.sigma);
    double lo = std::log(cfg.n / (r * cfg.delta));
    return s + cfg.c_partial * ratio *
                   (s * std::log(2.0 * std::numbers::e * cfg.p / s) + lo);
}

SubGaussianCalibration::SubGaussianCalibration(SubGaussianTestConfig cfg)
    : cfg_(std::move(cfg)) {
    if (!(cfg_.delta > 0.0 && cfg_.delta < 1.0))
        throw std::invalid_argument("SubGaussianCalibration: delta must be in (0,1)");
    if (cfg_.sigma <= 0.0)
        throw std::invalid_argument("SubGaussianCalibration: sigma must be positive");
    if (cfg_.c_dense <= 0.0 || cfg_.c_partial <= 0.0)
        throw std::invalid_argument("SubGaussianCalibration: tuning constants must be positive");
    if (cfg_.L <= 0.0) cfg_.L = gaussian_psi2(cfg_.sigma);
    sparsities_ = dyadic_sparsities(cfg_.p);
    for (int r : cfg_.grid.scales) {
        ScaleTable table;
        table.dense = sg_dense_threshold(cfg_, r);
        table.partial.reserve(sparsities_.size());
        for (int s : sparsities_) table.partial.push_back(sg_partial_threshold(cfg_, r, s));
        scales_.emplace(r, std::move(table));
    }
}

double SubGaussianCalibration::dense_thresh(int r) const { return scales_.at(r).dense; }

double SubGaussianCalibration::partial_thresh(int r, int s) const {
    const auto& t = scales_.at(r);
    for (std::size_t i = 0; i < sparsities_.size(); ++i)
        if (sparsities_[i] == s) return t.partial[i];
    throw std::invalid_argument("partial_thresh: s not a dyadic sparsity");
}

std::string SubGaussianCalibration::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = cfg_.n;
    j["p"] = cfg_.p;
    j["sigma"] = cfg_.sigma;
    j["delta"] = cfg_.delta;
    j["L"] = cfg_.L;
    j["c_dense"] = cfg_.c_dense;
    j["c_partial"] = cfg_.c_partial;
    j["sparsities"] = sparsities_;
    nlohmann::ordered_json per_scale = nlohmann::ordered_json::array();
    for (const auto& [r, t] : scales_) {
        nlohmann::ordered_json s;
        s["r"] = r;
        s["dense_threshold"] = t.dense;
        s["partial_thresholds"] = t.partial;
        per_scale.push_back(std::move(s));
    }
    j["scales"] = per_scale;
    return j.dump(2);
}

TestVerdict sg_dense_test(const CusumVector& c, const SubGaussianCalibration& cal) {
    TestVerdict v;
    v.statistic_value = dense_stat(c);
    v.threshold = cal.dense_thresh(c.point.r);
    v.fired = v.statistic_value > v.threshold;
    v.source = v.fired ? TestSource::dense : TestSource::none;
    return v;
}

TestVerdict sg_partial_test(const CusumVector& c, const SubGaussianCalibration& cal) {
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

TestVerdict sg_combined_test(const CusumVector& c, const SubGaussianCalibration& cal) {
    if (auto v = sg_dense_test(c, cal); v.fired) return v;
    if (auto v = sg_partial_test(c, cal); v.fired) return v;
    return {};
}

TestVerdict sg_dense_test(const TimeSeries& series, GridPoint point,
                          const SubGaussianCalibration& cal) {
    return sg_dense_test(cusum(series, point, cal.config().sigma), cal);
}
TestVerdict sg_partial_test(const TimeSeries& series, GridPoint point,
                            const SubGaussianCalibration& cal) {
    return sg_partial_test(cusum(series, point, cal.config().sigma), cal);
}
TestVerdict sg_combined_test(const TimeSeries& series, GridPoint point,
                             const SubGaussianCalibration& cal) {
    return sg_combined_test(cusum(series, point, cal.config().sigma), cal);
}

}  // namespace cpd
