#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpd/grid.hpp"
#include "cpd/simulation.hpp"

namespace cpd {

// Boolean verdict for every grid point.
struct TestOutcomeMap {
    Grid grid;
    std::map<GridPoint, bool> verdicts;

    bool fired(GridPoint pt) const;
    void set(GridPoint pt, bool value);
};

// Connected interval of admitted detection intervals.
struct SegComponent {
    int lo = 0;                // closed integer interval [lo, hi]
    int hi = 0;
    std::vector<int> scales;   // scales that contributed, ascending

    // Midpoint is integer or half-integer; tau2 = lo + hi keeps it exact.
    int tau2() const { return lo + hi; }
    double tau() const { return 0.5 * (lo + hi); }
    int tau_int() const;       // rounded, halves go down
};

struct Segmentation {
    std::vector<SegComponent> components;  // disjoint, ascending

    int K_hat() const { return static_cast<int>(components.size()); }
    std::vector<double> changepoints() const;
    std::string to_json() const;
};

// Algorithm: scale-ascending sweep; an interval is admitted iff disjoint from
// everything admitted at strictly smaller scales; overlapping same-scale
// admitted intervals merge.
Segmentation aggregate_v1(const TestOutcomeMap& outcomes);

// Variant: an admitted interval freezes immediately, so a same-scale overlap
// at a larger location is discarded instead of merged.
Segmentation aggregate_v2(const TestOutcomeMap& outcomes);

// Paired distances for equal-length vectors.
double hausdorff(const std::vector<double>& u, const std::vector<double>& v);
double wasserstein(const std::vector<double>& u, const std::vector<double>& v);

struct Theorem1Report {
    bool pass = false;
    std::vector<std::string> violations;
};

// Checks, for outcomes on the joint event (no false positives on H_0, firing
// at every anchor), that the aggregated estimate detects each significant
// change-point within r_bar_k - 1 and detects nothing spurious.
Theorem1Report theorem1_check(const GroundTruth& truth,
                              const std::vector<int>& significant,
                              const std::map<int, GridPoint>& anchors,
                              const TestOutcomeMap& outcomes,
                              const Segmentation& result);

// True iff no change-point lies in the open interval (l-r, l+r): the local
// null hypothesis at (l, r).
bool is_null_segment(const GroundTruth& truth, GridPoint pt);

}  // namespace cpd
