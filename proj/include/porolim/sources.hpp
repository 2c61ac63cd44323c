#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <variant>
#include <vector>

#include "porolim/errors.hpp"
#include "porolim/grid.hpp"

namespace porolim {

/// A point source of given strength at location x0 in [0,1].
struct Dirac {
    double x0;
    double strength;
};

using SourceField = std::variant<Dirac, std::vector<double>>;

/// Injection/extraction fields plus the injected-fluid saturation c.
struct SourceSpec {
    SourceField injection = std::vector<double>{};
    SourceField extraction = std::vector<double>{};
    double c = 1.0;
};

/// A Dirac of strength w deposits w/h into the single cell containing x0
/// (leftmost cell for x0=0, rightmost for x0=1); per-cell vectors pass
/// through unchanged (empty vector means zero field).
inline std::vector<double> discretize_field(const SourceField& f, const Grid& grid) {
    std::vector<double> out(grid.n_cells, 0.0);
    if (const auto* d = std::get_if<Dirac>(&f)) {
        if (d->x0 < 0.0 || d->x0 > 1.0)
            throw ConfigError("point source location outside [0,1]");
        if (d->strength < 0.0)
            throw ConfigError("point source strength must be nonnegative");
        std::size_t cell = static_cast<std::size_t>(std::floor(d->x0 / grid.h));
        if (cell >= grid.n_cells) cell = grid.n_cells - 1;
        out[cell] = d->strength / grid.h;
        return out;
    }
    const auto& v = std::get<std::vector<double>>(f);
    if (v.empty()) return out;
    if (v.size() != grid.n_cells)
        throw ConfigError("per-cell source vector length does not match the grid");
    for (double x : v)
        if (x < 0.0) throw ConfigError("source fields must be nonnegative");
    return v;
}

inline std::pair<std::vector<double>, std::vector<double>>
discretize_sources(const SourceSpec& spec, const Grid& grid) {
    if (spec.c < 0.0 || spec.c > 1.0)
        throw ConfigError("injected saturation c must lie in [0,1]");
    return {discretize_field(spec.injection, grid),
            discretize_field(spec.extraction, grid)};
}

/// h * sum(inj - ext); zero for compatible (balanced) sources.
inline double source_imbalance(const std::vector<double>& inj,
                               const std::vector<double>& ext, const Grid& grid) {
    double s = 0.0;
    for (std::size_t i = 0; i < inj.size(); ++i) s += inj[i] - ext[i];
    return grid.h * s;
}

} // namespace porolim
