#pragma once

// Flow-flow arc formulation: machines and the server are two flow networks on
// the same time nodes, coupled by shared job start variables x_{j,t}.

#include <span>
#include <stdexcept>
#include <vector>

#include "pms/flow_layout.hpp"
#include "pms/instance.hpp"
#include "pms/milp.hpp"
#include "pms/schedule.hpp"

namespace pms {

struct FlowModel {
    MilpModel milp;
    ArcFlowLayout layout;

    nlohmann::json manifest() const { return layout.manifest(milp.variable_names()); }
};

class HorizonError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Objective sum t*z_t; one assignment row per job (per class with right-hand
/// side n_j when `grouped`); flow conservation for G_M at t = 0, 1..T-1, T and
/// for G_S likewise. Variables are declared in the order x (class, t), yM, yS,
/// z and named x_{rep}_{t}, yM_{t}, yS_{t}, z_{t}.
/// Throws HorizonError when T < max_j (s_j + p_j).
FlowModel build_fff(const Instance& inst, int horizon, bool grouped);

/// build_fff with grouping, plus z_t fixed to zero for t < lb_better, branching
/// priority decreasing in t on every x, up-branch first, and the aggressive
/// incumbent-search flag.
FlowModel build_fft(const Instance& inst, int horizon);

/// Closed-form size of build_fff: sum over classes of (T - s - p + 1) + 3T.
long long count_variables(const Instance& inst, int horizon, bool grouped);
long long count_constraints(const Instance& inst, int horizon, bool grouped);

/// Full variable assignment encoding `sched` (makespan <= T): x from setup
/// starts, idle flows from how many machines / whether the server are free
/// over each unit slot, and z at the makespan. Throws std::invalid_argument if
/// the result does not satisfy the flow balances.
std::vector<double> encode_schedule(const FlowModel& model, const Schedule& sched, const Instance& inst);

}  // namespace pms
