#include "pms/arcflow.hpp"

#include <fmt/format.h>

#include "pms/bounds.hpp"

namespace pms {

int ArcFlowLayout::variable_count() const {
    std::size_t n = idle_machine.size() + idle_server.size() + (sink.empty() ? 0 : sink.size() - 1);
    for (const auto& row : x) n += row.size();
    return static_cast<int>(n);
}

nlohmann::json ArcFlowLayout::manifest(const std::vector<std::string>& names) const {
    nlohmann::json doc;
    doc["horizon"] = horizon;
    doc["machines"] = machines;
    doc["classes"] = nlohmann::json::array();
    for (const JobClass& c : classes)
        doc["classes"].push_back({{"representative", c.representative},
                                  {"setup", c.setup},
                                  {"processing", c.processing},
                                  {"multiplicity", c.multiplicity},
                                  {"jobs", c.job_ids}});
    auto& vars = doc["variables"] = nlohmann::json::object();
    auto name = [&](int var) { return names.at(static_cast<std::size_t>(var)); };
    for (std::size_t c = 0; c < x.size(); ++c)
        for (std::size_t t = 0; t < x[c].size(); ++t)
            vars[name(x[c][t])] = {{"family", "x"}, {"class", c}, {"t", t}};
    for (std::size_t t = 0; t < idle_machine.size(); ++t) vars[name(idle_machine[t])] = {{"family", "yM"}, {"t", t}};
    for (std::size_t t = 0; t < idle_server.size(); ++t) vars[name(idle_server[t])] = {{"family", "yS"}, {"t", t}};
    for (std::size_t t = 1; t < sink.size(); ++t) vars[name(sink[t])] = {{"family", "z"}, {"t", t}};
    return doc;
}

namespace {

void check_horizon(const Instance& inst, int horizon) {
    if (horizon < inst.max_span())
        throw HorizonError(fmt::format("horizon {} is shorter than the longest job ({})", horizon, inst.max_span()));
}

// Conservation rows of one graph. `length(c)` is the arc length of class c in
// this graph, `capacity` the flow routed from node 0.
void add_flow_rows(MilpModel& milp, const ArcFlowLayout& layout, const std::vector<int>& idle, int capacity,
                   const char* prefix, auto length) {
    const int T = layout.horizon;
    for (int t = 0; t <= T; ++t) {
        std::vector<Term> terms;
        for (std::size_t c = 0; c < layout.classes.size(); ++c) {
            const int last = layout.last_start(static_cast<int>(c));
            if (t < T && t <= last) terms.push_back({layout.x[c][static_cast<std::size_t>(t)], 1.0});
            const int tail = t - length(layout.classes[c]);
            if (t > 0 && tail >= 0 && tail <= last) terms.push_back({layout.x[c][static_cast<std::size_t>(tail)], -1.0});
        }
        if (t < T) terms.push_back({idle[static_cast<std::size_t>(t)], 1.0});
        if (t > 0) {
            terms.push_back({idle[static_cast<std::size_t>(t - 1)], -1.0});
            terms.push_back({layout.sink[static_cast<std::size_t>(t)], static_cast<double>(capacity)});
        }
        milp.add_constraint(fmt::format("{}_{}", prefix, t), std::move(terms), RowSense::Equal,
                            t == 0 ? static_cast<double>(capacity) : 0.0);
    }
}

}  // namespace

FlowModel build_fff(const Instance& inst, int horizon, bool grouped) {
    check_horizon(inst, horizon);
    FlowModel model;
    ArcFlowLayout& layout = model.layout;
    MilpModel& milp = model.milp;
    layout.horizon = horizon;
    layout.machines = inst.machines;
    layout.classes = grouped ? group_identical(inst) : singleton_classes(inst);

    const int T = horizon;
    for (std::size_t c = 0; c < layout.classes.size(); ++c) {
        const JobClass& cls = layout.classes[c];
        auto& row = layout.x.emplace_back();
        for (int t = 0; t <= layout.last_start(static_cast<int>(c)); ++t)
            row.push_back(milp.add_variable(fmt::format("x_{}_{}", cls.representative, t), VarKind::Binary, 0, 1));
    }
    for (int t = 0; t < T; ++t)
        layout.idle_machine.push_back(milp.add_variable(fmt::format("yM_{}", t), VarKind::Integer, 0, inst.machines));
    for (int t = 0; t < T; ++t)
        layout.idle_server.push_back(milp.add_variable(fmt::format("yS_{}", t), VarKind::Binary, 0, 1));
    layout.sink.push_back(-1);
    for (int t = 1; t <= T; ++t)
        layout.sink.push_back(milp.add_variable(fmt::format("z_{}", t), VarKind::Binary, 0, 1, static_cast<double>(t)));

    for (std::size_t c = 0; c < layout.classes.size(); ++c) {
        std::vector<Term> terms;
        for (int var : layout.x[c]) terms.push_back({var, 1.0});
        milp.add_constraint(fmt::format("assign_{}", layout.classes[c].representative), std::move(terms),
                            RowSense::Equal, layout.classes[c].multiplicity);
    }
    add_flow_rows(milp, layout, layout.idle_machine, inst.machines, "flowM", [](const JobClass& c) { return c.span(); });
    add_flow_rows(milp, layout, layout.idle_server, 1, "flowS", [](const JobClass& c) { return c.setup; });
    return model;
}

FlowModel build_fft(const Instance& inst, int horizon) {
    FlowModel model = build_fff(inst, horizon, true);
    HintSet& hints = model.milp.hints();
    const std::int64_t lower = lb_better(inst);
    for (int t = 1; t <= horizon && t < lower; ++t) hints.fixed_zero.insert(model.layout.sink[static_cast<std::size_t>(t)]);
    for (const auto& row : model.layout.x) {
        for (std::size_t t = 0; t < row.size(); ++t) {
            hints.branch_priority[row[t]] = horizon - static_cast<int>(t) + 1;
            hints.branch_direction[row[t]] = BranchDirection::Up;
        }
    }
    hints.aggressive_incumbent_search = true;
    return model;
}

long long count_variables(const Instance& inst, int horizon, bool grouped) {
    const auto classes = grouped ? group_identical(inst) : singleton_classes(inst);
    long long n = 3LL * horizon;
    for (const JobClass& c : classes) n += std::max(0, horizon - c.span() + 1);
    return n;
}

long long count_constraints(const Instance& inst, int horizon, bool grouped) {
    const auto classes = grouped ? group_identical(inst) : singleton_classes(inst);
    return static_cast<long long>(classes.size()) + 2LL * (horizon + 1);
}

std::vector<double> encode_schedule(const FlowModel& model, const Schedule& sched, const Instance& inst) {
    const ArcFlowLayout& layout = model.layout;
    const int T = layout.horizon;
    if (sched.makespan > T || sched.makespan < 1)
        throw std::invalid_argument(fmt::format("makespan {} outside the horizon 1..{}", sched.makespan, T));

    std::vector<int> class_of(static_cast<std::size_t>(inst.size()) + 1, -1);
    for (std::size_t c = 0; c < layout.classes.size(); ++c)
        for (int id : layout.classes[c].job_ids) class_of[static_cast<std::size_t>(id)] = static_cast<int>(c);

    std::vector<double> values(static_cast<std::size_t>(model.milp.variable_count()), 0.0);
    std::vector<int> machines_busy(static_cast<std::size_t>(T), 0);
    std::vector<int> server_busy(static_cast<std::size_t>(T), 0);
    for (const Assignment& a : sched.assignments) {
        const int c = class_of.at(static_cast<std::size_t>(a.job));
        if (c < 0 || a.setup_start < 0 || a.setup_start > layout.last_start(c))
            throw std::invalid_argument(fmt::format("job {} cannot start at {}", a.job, a.setup_start));
        values[static_cast<std::size_t>(layout.x[static_cast<std::size_t>(c)][static_cast<std::size_t>(a.setup_start)])] += 1.0;
        for (int t = a.setup_start; t < a.completion(); ++t) ++machines_busy[static_cast<std::size_t>(t)];
        for (int t = a.setup_start; t < a.setup_end(); ++t) ++server_busy[static_cast<std::size_t>(t)];
    }
    for (int t = 0; t < sched.makespan; ++t) {
        const auto k = static_cast<std::size_t>(t);
        if (machines_busy[k] > layout.machines || server_busy[k] > 1)
            throw std::invalid_argument(fmt::format("resource overload in slot [{}, {})", t, t + 1));
        values[static_cast<std::size_t>(layout.idle_machine[k])] = layout.machines - machines_busy[k];
        values[static_cast<std::size_t>(layout.idle_server[k])] = 1 - server_busy[k];
    }
    values[static_cast<std::size_t>(layout.sink[static_cast<std::size_t>(sched.makespan)])] = 1.0;

    if (auto bad = audit_flow(layout, values); !bad.empty())
        throw std::invalid_argument(fmt::format("schedule does not encode a feasible flow: graph {} node {} residual {}",
                                                bad.front().graph, bad.front().node, bad.front().residual));
    return values;
}

}  // namespace pms
