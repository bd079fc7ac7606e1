#pragma once

#include "pms/instance.hpp"
#include "pms/schedule.hpp"

namespace pms::testing {

inline Instance five_jobs() { return make_instance(3, {{2, 3}, {3, 5}, {3, 4}, {2, 5}, {2, 3}}); }

// The C = 17 example schedule drawn for the five-job instance.
inline Schedule five_jobs_example() {
    return make_schedule(3, {{1, 1, 0, 2, 3}, {2, 2, 2, 3, 5}, {3, 1, 5, 3, 4}, {5, 3, 8, 2, 3}, {4, 2, 10, 2, 5}});
}

}  // namespace pms::testing
