#include "cpd/theorem1_suite.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "cpd/aggregation.hpp"
#include "cpd/grid.hpp"
#include "cpd/simulation.hpp"

namespace cpd {

namespace {

// All ascending change-point sets in (1, n] with consecutive gaps (including
// the boundary sentinels 1 and n+1) at least `spacing`.
void enumerate_taus(int n, int spacing, int max_K, std::vector<int>& current,
                    std::vector<std::vector<int>>& out) {
    out.push_back(current);
    if (static_cast<int>(current.size()) == max_K) return;
    int lo = (current.empty() ? 1 : current.back()) + spacing;
    for (int t = lo; t + spacing <= n + 1; ++t) {
        current.push_back(t);
        enumerate_taus(n, spacing, max_K, current, out);
        current.pop_back();
    }
}

struct Anchor {
    GridPoint pt;
    bool ok = false;
};

// Nearest admissible location at scale r, ties to the left; ok only when the
// location error fits within r - 1.
Anchor anchor_at_scale(const Grid& grid, int r, int tau) {
    Anchor a;
    if (!grid.locations.count(r)) return a;
    GridPoint pt = nearest_anchor(grid, r, tau);
    if (std::abs(pt.l - tau) <= r - 1) {
        a.pt = pt;
        a.ok = true;
    }
    return a;
}

// Smallest and largest admissible anchor scales for change-point k.
std::vector<GridPoint> anchor_candidates(const Grid& grid, int r_k, int tau) {
    std::vector<GridPoint> found;
    for (int r : grid.scales) {
        if (4 * (r - 1) >= r_k) continue;
        Anchor a = anchor_at_scale(grid, r, tau);
        if (a.ok) found.push_back(a.pt);
    }
    std::vector<GridPoint> picked;
    if (!found.empty()) {
        picked.push_back(found.front());
        if (found.back() != found.front()) picked.push_back(found.back());
    }
    return picked;
}

TestOutcomeMap anchors_only(const Grid& grid, const std::map<int, GridPoint>& anchors) {
    TestOutcomeMap out;
    out.grid = grid;
    for (int r : grid.scales)
        for (int l : grid.locations_at(r)) out.verdicts[{l, r}] = false;
    for (const auto& [k, pt] : anchors) out.verdicts[pt] = true;
    return out;
}

TestOutcomeMap all_non_null(const Grid& grid, const GroundTruth& truth) {
    TestOutcomeMap out;
    out.grid = grid;
    for (int r : grid.scales)
        for (int l : grid.locations_at(r))
            out.verdicts[{l, r}] = !is_null_segment(truth, {l, r});
    return out;
}

}  // namespace

Theorem1SuiteResult run_theorem1_suite(int n_min, int n_max, int min_spacing, int max_K) {
    Theorem1SuiteResult res;
    for (int n = n_min; n <= n_max; ++n) {
        std::vector<std::vector<int>> configs;
        std::vector<int> current;
        enumerate_taus(n, min_spacing, max_K, current, configs);

        const Grid grids[2] = {build_dyadic_grid(n), build_complete_grid(n)};
        for (const auto& tau : configs) {
            std::vector<std::vector<double>> mus(tau.size() + 1, std::vector<double>(1));
            for (std::size_t i = 0; i < mus.size(); ++i) mus[i][0] = i % 2 ? 1.0 : 0.0;
            GroundTruth truth = make_signal(n, 1, tau, mus);

            for (const Grid& grid : grids) {
                if (truth.K() == 0) {
                    // The favourable event forbids every firing here, so the
                    // only consistent outcome is all-quiet.
                    TestOutcomeMap quiet = anchors_only(grid, {});
                    for (int variant = 0; variant < 2; ++variant) {
                        Segmentation seg =
                            variant == 0 ? aggregate_v1(quiet) : aggregate_v2(quiet);
                        ++res.instances;
                        if (seg.K_hat() != 0) {
                            ++res.failures;
                            res.sample_violations.push_back("spurious estimate on K=0, n=" +
                                                            std::to_string(n));
                        }
                    }
                    continue;
                }
                // Per-change-point anchor candidates; a configuration is only
                // exercised when every change-point admits an anchor.
                std::vector<std::vector<GridPoint>> cand;
                bool all_anchored = true;
                for (int k = 1; k <= truth.K(); ++k) {
                    cand.push_back(anchor_candidates(grid, truth.length(k), truth.tau_at(k)));
                    if (cand.back().empty()) all_anchored = false;
                }
                if (!all_anchored) continue;

                std::vector<int> significant(truth.K());
                for (int k = 1; k <= truth.K(); ++k) significant[k - 1] = k;

                std::vector<std::size_t> pick(cand.size(), 0);
                while (true) {
                    std::map<int, GridPoint> anchors;
                    for (int k = 1; k <= truth.K(); ++k)
                        anchors[k] = cand[k - 1][pick[k - 1]];

                    const TestOutcomeMap variants[2] = {anchors_only(grid, anchors),
                                                        all_non_null(grid, truth)};
                    for (const auto& outcomes : variants) {
                        bool anchors_fire = true;
                        for (const auto& [k, pt] : anchors)
                            if (!outcomes.fired(pt)) anchors_fire = false;
                        if (!anchors_fire) continue;
                        for (int variant = 0; variant < 2; ++variant) {
                            Segmentation seg = variant == 0 ? aggregate_v1(outcomes)
                                                            : aggregate_v2(outcomes);
                            Theorem1Report rep =
                                theorem1_check(truth, significant, anchors, outcomes, seg);
                            ++res.instances;
                            if (!rep.pass) {
                                ++res.failures;
                                if (res.sample_violations.size() < 20) {
                                    std::ostringstream os;
                                    os << "n=" << n << " tau=[";
                                    for (std::size_t i = 0; i < tau.size(); ++i)
                                        os << (i ? "," : "") << tau[i];
                                    os << "] grid="
                                       << (grid.kind == GridKind::dyadic ? "dyadic"
                                                                         : "complete")
                                       << " agg=v" << (variant + 1) << ": "
                                       << (rep.violations.empty() ? "?" : rep.violations[0]);
                                    res.sample_violations.push_back(os.str());
                                }
                            }
                        }
                    }

                    // next anchor combination
                    std::size_t i = 0;
                    while (i < pick.size() && ++pick[i] == cand[i].size()) pick[i++] = 0;
                    if (i == pick.size()) break;
                }
            }
        }
    }
    return res;
}

}  // namespace cpd
