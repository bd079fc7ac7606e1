#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pms/flow_layout.hpp"
#include "pms/instance.hpp"

namespace pms {

/// One job occurrence. The machine is held from setup_start until completion;
/// the server only during [setup_start, setup_end).
struct Assignment {
    int job = 0;
    int machine = 0;  // 1-based
    int setup_start = 0;
    int setup = 0;
    int processing = 0;

    int setup_end() const { return setup_start + setup; }
    int completion() const { return setup_start + setup + processing; }
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Schedule {
    int machines = 0;
    std::vector<Assignment> assignments;  // sorted by (setup_start, job)
    int makespan = 0;

    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Sorts assignments and sets the makespan to the latest completion.
Schedule make_schedule(int machines, std::vector<Assignment> assignments);

/// Builds a schedule from (job id, setup start) pairs, copying lengths from the
/// instance and placing each job on the lowest-indexed machine that is free at
/// its start. Throws std::invalid_argument if more than m jobs overlap.
Schedule schedule_from_starts(const Instance& inst, const std::vector<std::pair<int, int>>& job_starts);

struct Violation {
    std::string rule;  // "coverage", "lengths", "machine-range", "start", "server", "machine", "makespan"
    std::vector<int> jobs;
    int from = 0;
    int to = 0;
    std::string message;
};

/// Empty iff the schedule is feasible for `inst` and its makespan field is right.
std::vector<Violation> validate(const Schedule& sched, const Instance& inst);

std::string gantt_svg(const Schedule& sched);

nlohmann::json to_json(const Schedule& sched);
Schedule schedule_from_json(const nlohmann::json& doc, const Instance& inst);

// ---------------------------------------------------------------------------
// Flow decoding

struct FlowResidual {
    char graph = 'M';  // 'M' machines, 'S' server, 'A' assignment row, 'Z' sink count
    int node = 0;      // time node, class index for 'A'
    double residual = 0.0;
};

/// Recomputes every conservation balance of the machine and server graphs,
/// the class assignment totals, and the sink count from raw variable values.
/// Returns the balances whose magnitude exceeds `tol`.
std::vector<FlowResidual> audit_flow(const ArcFlowLayout& layout, std::span<const double> values,
                                     double tol = 1e-6);

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Splits the machine-graph flow into m unit paths from node 0 to the sink and
/// turns each path into one machine's job sequence. Class occurrences get real
/// job ids in ascending order of start time.
Schedule decode_flow(const ArcFlowLayout& layout, std::span<const double> values, const Instance& inst);

}  // namespace pms
