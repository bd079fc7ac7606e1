#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pms/instance.hpp"
#include "pms/schedule.hpp"

namespace pms {

struct OracleResult {
    int optimum = 0;
    Schedule witness;
    std::vector<int> server_order;  // job ids in setup order of the witness
    std::int64_t permutations_explored = 0;  // complete orders evaluated
};

class OracleLimitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dispatches a fixed server order: each setup starts as soon as the server
/// and some machine are free, on the earliest-free machine.
Schedule dispatch_order(const Instance& inst, const std::vector<int>& order);

/// Exact optimum by enumerating server orders with `dispatch_order`.
///
/// For a fixed order, starting every setup as early as possible on the
/// earliest-free machine is optimal: by induction over the order, the server
/// release time and the sorted vector of machine release times are
/// componentwise no later than in any other schedule with that order, so no
/// completion can be earlier elsewhere. Enumerating all n! orders therefore
/// covers an optimal schedule.
///
/// Partial orders are abandoned when the server release time plus the
/// remaining setups plus the shortest remaining processing time cannot beat
/// the incumbent. Throws OracleLimitError when n > cap.
OracleResult brute_force(const Instance& inst, int cap = 8);

}  // namespace pms
