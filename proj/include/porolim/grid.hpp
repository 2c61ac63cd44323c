#pragma once

#include <cstddef>
#include <vector>

#include "porolim/errors.hpp"

namespace porolim {

/// Uniform 1-D cell partition of [0,1]. h is derived from n_cells, never
/// user-supplied independently.
struct Grid {
    std::size_t n_cells;
    double h;
    std::vector<double> centers;
};

inline Grid build_grid(std::size_t n_cells) {
    if (n_cells < 2) throw ConfigError("grid needs at least 2 cells");
    Grid g;
    g.n_cells = n_cells;
    g.h = 1.0 / static_cast<double>(n_cells);
    g.centers.resize(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i)
        g.centers[i] = (static_cast<double>(i) + 0.5) * g.h;
    return g;
}

} // namespace porolim
