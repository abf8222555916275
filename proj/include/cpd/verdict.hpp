#pragma once

namespace cpd {

enum class TestSource { none, dense, berk_jones, partial };

const char* to_string(TestSource s);

// Outcome of one local test at one grid point.
struct TestVerdict {
    bool fired = false;
    TestSource source = TestSource::none;
    double statistic_value = 0.0;
    double threshold = 0.0;
};

}  // namespace cpd
