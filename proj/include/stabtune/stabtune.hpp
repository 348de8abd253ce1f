#pragma once

// Umbrella header: tuning-parameter selection for penalized least squares
// by variable-selection stability, plus the classical criteria it is
// benchmarked against.

#include "stabtune/criteria.hpp"
#include "stabtune/csv.hpp"
#include "stabtune/dataset.hpp"
#include "stabtune/error.hpp"
#include "stabtune/penalty.hpp"
#include "stabtune/report.hpp"
#include "stabtune/rng.hpp"
#include "stabtune/sim.hpp"
#include "stabtune/solver.hpp"
#include "stabtune/stability.hpp"
#include "stabtune/version.hpp"
