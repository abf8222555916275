#include "cpd/verdict.hpp"

namespace cpd {

const char* to_string(TestSource s) {
    switch (s) {
        case TestSource::dense: return "dense";
        case TestSource::berk_jones: return "berk_jones";
        case TestSource::partial: return "partial";
        default: return "none";
    }
}

}  // namespace cpd
