#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "pms/instance.hpp"

namespace pms {

/// Variable map of an arc-flow model over the time nodes {0, ..., T}.
///
/// Execution arc (c, t) leaves node t and ends at t + s_c in the server graph
/// and at t + s_c + p_c in the machine graph; a single variable x_{c,t} carries
/// the flow on both. Idle arcs (t, t+1) carry yM_t (machines) and yS_t
/// (server). z_t marks the sink node, i.e. the makespan.
struct ArcFlowLayout {
    int horizon = 0;
    int machines = 0;
    std::vector<JobClass> classes;
    std::vector<std::vector<int>> x;  // x[c][t], t = 0..T - span(c)
    std::vector<int> idle_machine;    // yM_t, t = 0..T-1
    std::vector<int> idle_server;     // yS_t, t = 0..T-1
    std::vector<int> sink;            // z_t at index t = 1..T; sink[0] = -1

    int last_start(int c) const { return horizon - classes[static_cast<std::size_t>(c)].span(); }
    int variable_count() const;

    /// {"horizon", "machines", "classes": [...], "variables": {name: {...}}}
    nlohmann::json manifest(const std::vector<std::string>& names) const;
};

}  // namespace pms
