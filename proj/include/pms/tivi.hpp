#pragma once

// Time-indexed baseline: binary start variables over the whole horizon and a
// continuous makespan variable bounded below by every completion time.

#include <span>
#include <vector>

#include "pms/instance.hpp"
#include "pms/milp.hpp"
#include "pms/schedule.hpp"

namespace pms {

struct TiviLayout {
    int horizon = 0;
    std::vector<std::vector<int>> x;  // x[j-1][t], t = 0..T
    int cmax = -1;
};

struct TiviModel {
    MilpModel milp;
    TiviLayout layout;
};

/// Rows: assignment per job; for every t = 0..T at most m jobs hold a machine
/// (starts in [t - s_j - p_j + 1, t]) and at most one holds the server (starts
/// in [t - s_j + 1, t]); sum_t (t + s_j + p_j) x_{j,t} <= Cmax per job.
/// Start variables exist for every t in 0..T even when the job would overrun T.
TiviModel build_tivi(const Instance& inst, int horizon);

/// Start times read from an integral incumbent; machines assigned greedily.
Schedule decode_tivi(const TiviModel& model, std::span<const double> values, const Instance& inst);

struct RelaxationReport {
    double lp = 0.0;
    double vs_trivial = 0.0;  // 100 * (lp - LB_Trivial) / LB_Trivial
};

RelaxationReport tivi_relaxation_report(const Instance& inst, int horizon);

/// Same percentage for any lower bound value.
double percent_vs_trivial(const Instance& inst, double bound);

}  // namespace pms
