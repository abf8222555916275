#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cpd {

// Deterministic verification harness: enumerates small signals, builds every
// admissible anchor assignment and the extreme test outcomes consistent with
// the favourable event (no false positives, anchors fire), and checks the
// aggregation guarantees on each instance.
struct Theorem1SuiteResult {
    std::int64_t instances = 0;
    std::int64_t failures = 0;
    std::vector<std::string> sample_violations;  // first few, for reporting

    bool pass() const { return failures == 0 && instances > 0; }
};

Theorem1SuiteResult run_theorem1_suite(int n_min = 6, int n_max = 24,
                                       int min_spacing = 4, int max_K = 3);

}  // namespace cpd
