#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cpd {

// A (location, scale) pair referring to the segment [l-r, l+r) of a length-n
// series.  Valid iff r >= 1, l-r >= 1 and l+r-1 <= n.
struct GridPoint {
    int l = 0;
    int r = 0;

    bool valid_for(int n) const {
        return r >= 1 && l - r >= 1 && l + r - 1 <= n;
    }
    friend bool operator==(const GridPoint&, const GridPoint&) = default;
    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

enum class GridKind { dyadic, adic, complete };

// Set of (location, scale) pairs on which local homogeneity tests run.
// Immutable after construction; safe to share across threads.
struct Grid {
    int n = 0;
    GridKind kind = GridKind::dyadic;
    double adic_ratio = 0.5;           // meaningful for kind == adic only
    std::vector<int> scales;           // ascending, every scale has locations
    std::map<int, std::vector<int>> locations;  // r -> sorted l list

    const std::vector<int>& locations_at(int r) const;
    std::size_t size() const;
    bool contains(GridPoint pt) const;

    // {"n":..., "kind":..., "scales":[...], "locations":{"r":[l,...]}}
    std::string to_json() const;
};

Grid build_dyadic_grid(int n);
Grid build_adic_grid(int n, double a);
Grid build_complete_grid(int n);

// True iff every integer l in [r+1, n-r] has a location l' in D_r with
// |l' - l| <= r - 1, for every scale r of the grid.
bool check_app(const Grid& grid);

}  // namespace cpd
