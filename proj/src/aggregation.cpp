#include "cpd/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cpd {

bool TestOutcomeMap::fired(GridPoint pt) const {
    auto it = verdicts.find(pt);
    return it != verdicts.end() && it->second;
}

void TestOutcomeMap::set(GridPoint pt, bool value) {
    if (!grid.contains(pt))
        throw std::invalid_argument("TestOutcomeMap::set: point not in grid");
    verdicts[pt] = value;
}

int SegComponent::tau_int() const {
    // round half down
    return (lo + hi) / 2 + ((lo + hi) % 2 != 0 && (lo + hi) < 0 ? -1 : 0);
}

std::vector<double> Segmentation::changepoints() const {
    std::vector<double> taus;
    taus.reserve(components.size());
    for (const auto& c : components) taus.push_back(c.tau());
    return taus;
}

std::string Segmentation::to_json() const {
    nlohmann::ordered_json j;
    j["K_hat"] = K_hat();
    nlohmann::ordered_json cps = nlohmann::ordered_json::array();
    for (const auto& c : components) {
        nlohmann::ordered_json e;
        e["tau"] = c.tau();
        e["tau_int"] = c.tau_int();
        e["interval"] = {c.lo, c.hi};
        e["scales"] = c.scales;
        cps.push_back(std::move(e));
    }
    j["changepoints"] = cps;
    return j.dump(2);
}

namespace {

struct Interval {
    int lo;
    int hi;
    int scale;
};

bool intersects_any(int lo, int hi, const std::vector<Interval>& set) {
    for (const auto& iv : set)
        if (lo <= iv.hi && iv.lo <= hi) return true;
    return false;
}

Segmentation components_of(std::vector<Interval> admitted) {
    std::sort(admitted.begin(), admitted.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Segmentation seg;
    for (const auto& iv : admitted) {
        if (!seg.components.empty() && iv.lo <= seg.components.back().hi) {
            // closed intervals sharing at least one point merge
            auto& back = seg.components.back();
            back.hi = std::max(back.hi, iv.hi);
            if (std::find(back.scales.begin(), back.scales.end(), iv.scale) ==
                back.scales.end())
                back.scales.push_back(iv.scale);
            continue;
        }
        seg.components.push_back({iv.lo, iv.hi, {iv.scale}});
    }
    for (auto& c : seg.components) std::sort(c.scales.begin(), c.scales.end());
    return seg;
}

}  // namespace

Segmentation aggregate_v1(const TestOutcomeMap& outcomes) {
    std::vector<Interval> admitted;   // all scales up to the current one
    std::vector<Interval> this_scale;
    for (int r : outcomes.grid.scales) {
        this_scale.clear();
        for (int l : outcomes.grid.locations_at(r)) {
            if (!outcomes.fired({l, r})) continue;
            int lo = l - r + 1, hi = l + r - 1;
            // guard uses only strictly smaller scales: same-scale intervals
            // are collected first and merged by the component pass
            if (!intersects_any(lo, hi, admitted)) this_scale.push_back({lo, hi, r});
        }
        admitted.insert(admitted.end(), this_scale.begin(), this_scale.end());
    }
    return components_of(std::move(admitted));
}

Segmentation aggregate_v2(const TestOutcomeMap& outcomes) {
    std::vector<Interval> admitted;
    for (int r : outcomes.grid.scales) {
        for (int l : outcomes.grid.locations_at(r)) {
            if (!outcomes.fired({l, r})) continue;
            int lo = l - r + 1, hi = l + r - 1;
            if (!intersects_any(lo, hi, admitted)) admitted.push_back({lo, hi, r});
        }
    }
    return components_of(std::move(admitted));
}

double hausdorff(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("hausdorff: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - v[i]));
    return d;
}

double wasserstein(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("wasserstein: length mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) d += std::abs(u[i] - v[i]);
    return d;
}

bool is_null_segment(const GroundTruth& truth, GridPoint pt) {
    for (int t : truth.tau)
        if (t > pt.l - pt.r && t < pt.l + pt.r) return false;
    return true;
}

Theorem1Report theorem1_check(const GroundTruth& truth,
                              const std::vector<int>& significant,
                              const std::map<int, GridPoint>& anchors,
                              const TestOutcomeMap& outcomes,
                              const Segmentation& result) {
    Theorem1Report report;
    const int K = truth.K();

    // Preconditions: anchor admissibility and the joint test event.
    for (int k : significant) {
        auto it = anchors.find(k);
        if (it == anchors.end())
            throw std::invalid_argument("theorem1_check: missing anchor for k=" +
                                        std::to_string(k));
        const GridPoint& a = it->second;
        if (!(4 * (a.r - 1) < truth.length(k)))
            throw std::invalid_argument("theorem1_check: anchor scale too large for k=" +
                                        std::to_string(k));
        if (std::abs(a.l - truth.tau_at(k)) > a.r - 1)
            throw std::invalid_argument("theorem1_check: anchor location too far for k=" +
                                        std::to_string(k));
        if (!outcomes.fired(a))
            throw std::invalid_argument("theorem1_check: anchor test did not fire for k=" +
                                        std::to_string(k));
    }
    // A firing on a locally-null segment breaks the favourable event; flag it
    // rather than throwing so adversarial outcomes still produce a report.
    for (const auto& [pt, fired] : outcomes.verdicts)
        if (fired && is_null_segment(truth, pt))
            report.violations.push_back("event: false positive in outcomes at (" +
                                        std::to_string(pt.l) + "," +
                                        std::to_string(pt.r) + ")");

    auto taus = result.changepoints();

    // (a) every significant change-point detected within r_bar - 1.
    for (int k : significant) {
        const GridPoint& a = anchors.at(k);
        double best = std::numeric_limits<double>::infinity();
        for (double t : taus) best = std::min(best, std::abs(t - truth.tau_at(k)));
        if (!(best <= a.r - 1)) {
            std::ostringstream os;
            os << "detection: k=" << k << " tau=" << truth.tau_at(k)
               << " nearest estimate at distance " << best << " > " << (a.r - 1);
            report.violations.push_back(os.str());
        }
    }

    // (b) no spurious: at most one estimate per true window, none beyond the
    // boundary windows.
    if (K > 0) {
        for (int k = 1; k <= K; ++k) {
            double wlo = truth.tau_at(k) - (truth.tau_at(k) - truth.tau_at(k - 1)) / 2.0;
            double whi = truth.tau_at(k) + (truth.tau_at(k + 1) - truth.tau_at(k)) / 2.0;
            int inside = 0;
            for (double t : taus)
                if (t >= wlo && t <= whi) ++inside;
            if (inside > 1) {
                std::ostringstream os;
                os << "no-spurious: " << inside << " estimates in window of tau_" << k;
                report.violations.push_back(os.str());
            }
        }
        double lo = truth.tau_at(1) - (truth.tau_at(1) - 1) / 2.0;
        double hi = truth.tau_at(K) + (truth.n + 1 - truth.tau_at(K)) / 2.0;
        for (double t : taus)
            if (t < lo || t > hi) {
                std::ostringstream os;
                os << "no-spurious: estimate " << t << " outside boundary window ["
                   << lo << ", " << hi << "]";
                report.violations.push_back(os.str());
            }
    } else if (!taus.empty()) {
        report.violations.push_back("no-spurious: estimates present with K=0");
    }

    report.pass = report.violations.empty();
    return report;
}

}  // namespace cpd
