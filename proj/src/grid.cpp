#include "cpd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cpd {

const std::vector<int>& Grid::locations_at(int r) const {
    static const std::vector<int> empty;
    auto it = locations.find(r);
    return it == locations.end() ? empty : it->second;
}

std::size_t Grid::size() const {
    std::size_t total = 0;
    for (const auto& [r, locs] : locations) total += locs.size();
    return total;
}

bool Grid::contains(GridPoint pt) const {
    auto it = locations.find(pt.r);
    if (it == locations.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), pt.l);
}

std::string Grid::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    switch (kind) {
        case GridKind::dyadic: j["kind"] = "dyadic"; break;
        case GridKind::adic: j["kind"] = "adic"; break;
        case GridKind::complete: j["kind"] = "complete"; break;
    }
    if (kind == GridKind::adic) j["a"] = adic_ratio;
    j["scales"] = scales;
    nlohmann::ordered_json locs = nlohmann::ordered_json::object();
    for (int r : scales) locs[std::to_string(r)] = locations.at(r);
    j["locations"] = locs;
    return j.dump(2);
}

namespace {

// Location lattice of half steps: r+1, r+step+1, r+2*step+1, ... clipped to
// the valid range.  Scale 1 runs over all of [2, n]; larger scales stop at
// n-r.  Scales with no valid location are dropped by the callers.
std::vector<int> lattice_locations(int n, int r, int step) {
    std::vector<int> locs;
    const int hi = r == 1 ? n : n - r;
    for (int l = r + 1; l <= hi; l += step) locs.push_back(l);
    return locs;
}

void append_scale(Grid& grid, int r, std::vector<int> locs) {
    if (locs.empty()) return;
    grid.scales.push_back(r);
    grid.locations.emplace(r, std::move(locs));
}

}  // namespace

Grid build_dyadic_grid(int n) {
    if (n < 2) throw std::invalid_argument("build_dyadic_grid: n must be >= 2");
    Grid grid;
    grid.n = n;
    grid.kind = GridKind::dyadic;
    append_scale(grid, 1, lattice_locations(n, 1, 1));
    int max_exp = static_cast<int>(std::floor(std::log2(static_cast<double>(n)))) - 1;
    for (int e = 1; e <= max_exp; ++e) {
        int r = 1 << e;
        append_scale(grid, r, lattice_locations(n, r, r / 2));
    }
    return grid;
}

Grid build_adic_grid(int n, double a) {
    if (n < 2) throw std::invalid_argument("build_adic_grid: n must be >= 2");
    if (!(a > 0.0 && a < 1.0))
        throw std::invalid_argument("build_adic_grid: a must be in (0,1)");
    Grid grid;
    grid.n = n;
    grid.kind = GridKind::adic;
    grid.adic_ratio = a;

    std::vector<int> scales{1};
    double power = 1.0;
    while (true) {
        power /= a;
        int r = static_cast<int>(std::floor(power));
        if (r > n / 2 || power > 2.0 * n) break;
        if (r != scales.back()) scales.push_back(r);  // dedup collided floors
    }
    for (int r : scales) {
        int step = r == 1 ? 1 : std::max(1, r / 2);
        append_scale(grid, r, lattice_locations(n, r, step));
    }
    return grid;
}

Grid build_complete_grid(int n) {
    if (n < 2) throw std::invalid_argument("build_complete_grid: n must be >= 2");
    Grid grid;
    grid.n = n;
    grid.kind = GridKind::complete;
    for (int r = 1; r <= n / 2; ++r) {
        std::vector<int> locs;
        for (int l = r + 1; l <= n - r; ++l) locs.push_back(l);
        append_scale(grid, r, std::move(locs));
    }
    return grid;
}

bool check_app(const Grid& grid) {
    for (int r : grid.scales) {
        const auto& locs = grid.locations_at(r);
        for (int l = r + 1; l <= grid.n - r; ++l) {
            // locs is sorted; nearest neighbour by binary search
            auto it = std::lower_bound(locs.begin(), locs.end(), l);
            int best = grid.n + 1;
            if (it != locs.end()) best = std::min(best, std::abs(*it - l));
            if (it != locs.begin()) best = std::min(best, std::abs(*std::prev(it) - l));
            if (best > r - 1) return false;
        }
    }
    return true;
}

}  // namespace cpd
