#pragma once

#include "plant.hpp"

namespace mitl {

// ---------------------------------------------------------------------------
// Scheduling benchmark: n machines serve jobs that arrive at least one time
// unit apart; an assignment is due within one time unit and occupies the
// chosen machine for T time units. See docs/benchmark.md for the encoding.

struct SchedInstance {
  Sts plant;
  FormulaPtr spec;
  Granularity mu;
};

/// `clocks` controller clocks at precision (1, T+1). Requires T, n >= 1.
SchedInstance sched_instance(int T, int n, int clocks);

}  // namespace mitl
