#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pqc/common.hpp"
#include "pqc/geometry.hpp"

namespace pqc {

struct Cell {
    int ix = 0, iy = 0, iz = 0;

    bool operator==(const Cell& o) const = default;
};

// Regular 3D grid of end-effector positions. Cell centers sit at
// ((i + 0.5) * cell_size) per axis, so the workspace spans [0, n * cell_size].
struct GridSpec {
    int nx = 11, ny = 11, nz = 7;
    double cell_size = 0.01;

    static GridSpec desk_scale() { return {11, 11, 7, 0.01}; }
    static GridSpec paper_scale() { return {21, 21, 12, 0.01}; }

    void validate() const {
        if (nx <= 0 || ny <= 0 || nz <= 0 || static_cast<long long>(nx) * ny * nz < 8)
            throw ConfigError("grid must have at least 8 cells");
        if (cell_size <= 0) throw ConfigError("cell_size must be positive");
    }

    long long n_cells() const { return static_cast<long long>(nx) * ny * nz; }

    bool in_bounds(const Cell& c) const {
        return c.ix >= 0 && c.ix < nx && c.iy >= 0 && c.iy < ny && c.iz >= 0 && c.iz < nz;
    }

    long long index(const Cell& c) const {
        return (static_cast<long long>(c.iz) * ny + c.iy) * nx + c.ix;
    }

    Cell cell_at(long long idx) const {
        Cell c;
        c.ix = static_cast<int>(idx % nx);
        c.iy = static_cast<int>((idx / nx) % ny);
        c.iz = static_cast<int>(idx / (static_cast<long long>(nx) * ny));
        return c;
    }

    Vec3 cell_center(const Cell& c) const {
        return {(c.ix + 0.5) * cell_size, (c.iy + 0.5) * cell_size, (c.iz + 0.5) * cell_size};
    }

    Vec3 extent() const { return {nx * cell_size, ny * cell_size, nz * cell_size}; }

    double diagonal() const { return extent().norm(); }

    // Episode step cap; generously above any shortest path on the grid.
    int horizon() const { return 4 * (nx + ny + nz); }
};

enum class Connectivity { Six, TwentySix };

struct ActionDelta {
    int dx, dy, dz;
    double len_cells;  // Euclidean length in cell units
};

// The action set is identical for all states; feasibility is checked per state.
// Six-connected order: +x, -x, +y, -y, +z, -z. Twenty-six-connected deltas are
// enumerated lexicographically by (dx, dy, dz).
inline const std::vector<ActionDelta>& action_set(Connectivity conn) {
    static const std::vector<ActionDelta> six = {
        {1, 0, 0, 1.0}, {-1, 0, 0, 1.0}, {0, 1, 0, 1.0},
        {0, -1, 0, 1.0}, {0, 0, 1, 1.0}, {0, 0, -1, 1.0},
    };
    static const std::vector<ActionDelta> twenty_six = [] {
        std::vector<ActionDelta> v;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    v.push_back({dx, dy, dz, std::sqrt(double(dx * dx + dy * dy + dz * dz))});
                }
        return v;
    }();
    return conn == Connectivity::Six ? six : twenty_six;
}

inline int action_count(Connectivity conn) { return conn == Connectivity::Six ? 6 : 26; }

inline Cell apply_action(const Cell& c, const ActionDelta& d) {
    return {c.ix + d.dx, c.iy + d.dy, c.iz + d.dz};
}

}  // namespace pqc
