#pragma once

#include "porolim/config.hpp"
#include "porolim/csvio.hpp"
#include "porolim/diagnostics.hpp"
#include "porolim/errors.hpp"
#include "porolim/grid.hpp"
#include "porolim/model.hpp"
#include "porolim/quadrature.hpp"
#include "porolim/solver.hpp"
#include "porolim/sources.hpp"
#include "porolim/transforms.hpp"
