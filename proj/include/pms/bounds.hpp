#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "pms/instance.hpp"
#include "pms/schedule.hpp"

namespace pms {

using Rational = boost::rational<std::int64_t>;

std::int64_t ceil(const Rational& r);
double to_double(const Rational& r);

enum class PriorityRule { SPT, LPT, SST, LST, SCT, LCT };

inline constexpr std::array<PriorityRule, 6> kAllRules = {PriorityRule::SPT, PriorityRule::LPT, PriorityRule::SST,
                                                          PriorityRule::LST, PriorityRule::SCT, PriorityRule::LCT};

std::string_view to_string(PriorityRule rule);

enum class Heuristic { HS1, HS2 };

std::string_view to_string(Heuristic h);

/// Average load: sum of (s_j + p_j) over m.
Rational lb_trivial(const Instance& inst);

/// max(sum s_j + min p_j, LB_Trivial + sum_{k=1}^{m-1} (m-k) s_(k) / m) rounded up,
/// where s_(1) <= s_(2) <= ... are the sorted setups. Setups beyond the n-th are
/// absent, so the weighted sum stops at min(m-1, n).
std::int64_t lb_better(const Instance& inst);

/// Job ids in priority order. Ties on the primary key are broken by a second
/// key of the same direction (LPT/LST, SPT/SST, SST/SPT, LST/LPT, SCT/SPT,
/// LCT/LPT), then by ascending id.
std::vector<int> order_jobs(const Instance& inst, PriorityRule rule);

/// Machine-idle oriented list scheduling: each job in rule order starts its
/// setup as soon as both the server and some machine are free, on the
/// earliest-free machine (lowest index on ties).
Schedule greedy_hs1(const Instance& inst, PriorityRule rule);

/// Server-idle oriented variant: at every step looks at the next
/// q = floor(n/10) + 1 unscheduled jobs in rule order and dispatches the one
/// after which the server can start its next setup earliest (rule order on
/// ties).
Schedule greedy_hs2(const Instance& inst, PriorityRule rule);

int hs2_lookahead(int n);

struct BoundReport {
    Rational lb_trivial_exact;
    std::int64_t lb_trivial_int = 0;
    std::int64_t lb_better = 0;
    std::int64_t ub = 0;
    Schedule ub_witness;
    Heuristic winning_heuristic = Heuristic::HS1;
    PriorityRule winning_rule = PriorityRule::SPT;
};

/// Runs both heuristics with all six rules; the best makespan is the horizon T
/// used by every model builder. Earlier (heuristic, rule) pairs win ties.
BoundReport horizon_ub(const Instance& inst);

}  // namespace pms
