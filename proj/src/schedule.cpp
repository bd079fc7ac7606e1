#include "pms/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace pms {

Schedule make_schedule(int machines, std::vector<Assignment> assignments) {
    std::sort(assignments.begin(), assignments.end(), [](const Assignment& a, const Assignment& b) {
        return std::pair(a.setup_start, a.job) < std::pair(b.setup_start, b.job);
    });
    Schedule sched{machines, std::move(assignments), 0};
    for (const Assignment& a : sched.assignments) sched.makespan = std::max(sched.makespan, a.completion());
    return sched;
}

Schedule schedule_from_starts(const Instance& inst, const std::vector<std::pair<int, int>>& job_starts) {
    std::vector<std::pair<int, int>> order(job_starts);
    std::sort(order.begin(), order.end(),
              [](auto a, auto b) { return std::pair(a.second, a.first) < std::pair(b.second, b.first); });
    std::vector<int> free_at(static_cast<std::size_t>(inst.machines), 0);
    std::vector<Assignment> out;
    out.reserve(order.size());
    for (auto [id, start] : order) {
        const Job& j = inst.job(id);
        auto it = std::find_if(free_at.begin(), free_at.end(), [&](int f) { return f <= start; });
        if (it == free_at.end())
            throw std::invalid_argument(fmt::format("no machine free for job {} at time {}", id, start));
        *it = start + j.span();
        out.push_back(Assignment{id, static_cast<int>(it - free_at.begin()) + 1, start, j.setup, j.processing});
    }
    return make_schedule(inst.machines, std::move(out));
}

std::vector<Violation> validate(const Schedule& sched, const Instance& inst) {
    std::vector<Violation> out;
    const int n = inst.size();

    std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
    for (const Assignment& a : sched.assignments) {
        if (a.job < 1 || a.job > n) {
            out.push_back({"coverage", {a.job}, 0, 0, fmt::format("unknown job {}", a.job)});
            continue;
        }
        ++seen[static_cast<std::size_t>(a.job)];
        const Job& j = inst.job(a.job);
        if (a.setup != j.setup || a.processing != j.processing)
            out.push_back({"lengths", {a.job}, a.setup_start, a.completion(),
                           fmt::format("job {} has lengths ({}, {}), instance says ({}, {})", a.job, a.setup,
                                       a.processing, j.setup, j.processing)});
        if (a.machine < 1 || a.machine > inst.machines)
            out.push_back({"machine-range", {a.job}, a.setup_start, a.completion(),
                           fmt::format("job {} on machine {} of {}", a.job, a.machine, inst.machines)});
        if (a.setup_start < 0)
            out.push_back({"start", {a.job}, a.setup_start, a.completion(),
                           fmt::format("job {} starts at negative time {}", a.job, a.setup_start)});
    }
    for (int id = 1; id <= n; ++id) {
        const int count = seen[static_cast<std::size_t>(id)];
        if (count != 1)
            out.push_back({"coverage", {id}, 0, 0, fmt::format("job {} scheduled {} times", id, count)});
    }

    const auto& as = sched.assignments;
    for (std::size_t i = 0; i < as.size(); ++i) {
        for (std::size_t k = i + 1; k < as.size(); ++k) {
            const Assignment& a = as[i];
            const Assignment& b = as[k];
            const int s_from = std::max(a.setup_start, b.setup_start);
            const int s_to = std::min(a.setup_end(), b.setup_end());
            if (s_from < s_to)
                out.push_back({"server", {a.job, b.job}, s_from, s_to,
                               fmt::format("setups of jobs {} and {} overlap on [{}, {})", a.job, b.job, s_from,
                                           s_to)});
            if (a.machine == b.machine) {
                const int m_from = std::max(a.setup_start, b.setup_start);
                const int m_to = std::min(a.completion(), b.completion());
                if (m_from < m_to)
                    out.push_back({"machine", {a.job, b.job}, m_from, m_to,
                                   fmt::format("jobs {} and {} both hold machine {} on [{}, {})", a.job, b.job,
                                               a.machine, m_from, m_to)});
            }
        }
    }

    int latest = 0;
    for (const Assignment& a : as) latest = std::max(latest, a.completion());
    if (latest != sched.makespan)
        out.push_back({"makespan", {}, latest, sched.makespan,
                       fmt::format("makespan field {} but latest completion is {}", sched.makespan, latest)});
    return out;
}

// ---------------------------------------------------------------------------

std::string gantt_svg(const Schedule& sched) {
    constexpr int kLeft = 70;
    constexpr int kTop = 20;
    constexpr int kRowHeight = 28;
    constexpr int kBarHeight = 20;
    const int horizon = std::max(1, sched.makespan);
    const int unit = std::clamp(800 / horizon, 4, 40);
    const int rows = sched.machines + 1;
    const int width = kLeft + horizon * unit + 20;
    const int axis_y = kTop + rows * kRowHeight + 4;
    const int height = axis_y + 30;
    const int tick = horizon <= 40 ? 1 : horizon <= 200 ? 5 : horizon <= 500 ? 10 : 50;

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"monospace\" "
        "font-size=\"11\">\n",
        width, height);
    svg += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto row_y = [&](int row) { return kTop + row * kRowHeight; };
    for (int r = 0; r < rows; ++r) {
        const std::string label = r < sched.machines ? fmt::format("M{}", r + 1) : std::string("Server");
        svg += fmt::format("<text x=\"4\" y=\"{}\">{}</text>\n", row_y(r) + kBarHeight - 5, label);
        svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n", kLeft,
                           row_y(r) + kRowHeight - 2, kLeft + horizon * unit, row_y(r) + kRowHeight - 2);
    }

    auto bar = [&](int row, int from, int to, const char* cls, const char* fill, int job) {
        svg += fmt::format(
            "<rect class=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"black\"/>\n", cls,
            kLeft + from * unit, row_y(row), (to - from) * unit, kBarHeight, fill);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                           kLeft + from * unit + (to - from) * unit / 2, row_y(row) + kBarHeight - 6, job);
    };
    // Machine rows get one bar per job; a dashed divider marks the end of its setup.
    for (const Assignment& a : sched.assignments) {
        bar(a.machine - 1, a.setup_start, a.completion(), "job", "#7da7d9", a.job);
        const int x = kLeft + a.setup_end() * unit;
        svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" "
                           "stroke-dasharray=\"3,2\"/>\n",
                           x, row_y(a.machine - 1), x, row_y(a.machine - 1) + kBarHeight);
        bar(sched.machines, a.setup_start, a.setup_end(), "setup", "#f4c37d", a.job);
    }

    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", kLeft, axis_y,
                       kLeft + horizon * unit, axis_y);
    for (int t = 0; t <= horizon; t += tick) {
        const int x = kLeft + t * unit;
        svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", x, axis_y, x,
                           axis_y + 4);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, axis_y + 16, t);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\">Cmax = {}</text>\n", kLeft, height - 2, sched.makespan);
    svg += "</svg>\n";
    return svg;
}

nlohmann::json to_json(const Schedule& sched) {
    nlohmann::json doc;
    doc["machines"] = sched.machines;
    doc["makespan"] = sched.makespan;
    doc["assignments"] = nlohmann::json::array();
    for (const Assignment& a : sched.assignments)
        doc["assignments"].push_back({{"job", a.job}, {"machine", a.machine}, {"setup_start", a.setup_start}});
    return doc;
}

Schedule schedule_from_json(const nlohmann::json& doc, const Instance& inst) {
    std::vector<Assignment> out;
    for (const auto& item : doc.at("assignments")) {
        const int id = item.at("job").get<int>();
        if (id < 1 || id > inst.size()) throw std::invalid_argument(fmt::format("unknown job {}", id));
        const Job& j = inst.job(id);
        out.push_back(Assignment{id, item.at("machine").get<int>(), item.at("setup_start").get<int>(), j.setup,
                                 j.processing});
    }
    Schedule sched = make_schedule(doc.at("machines").get<int>(), std::move(out));
    if (doc.contains("makespan")) sched.makespan = doc.at("makespan").get<int>();
    return sched;
}

// ---------------------------------------------------------------------------

namespace {

double value_of(std::span<const double> values, int var) {
    if (var < 0 || static_cast<std::size_t>(var) >= values.size())
        throw DecodeError(fmt::format("solution has no value for variable {}", var));
    return values[static_cast<std::size_t>(var)];
}

}  // namespace

std::vector<FlowResidual> audit_flow(const ArcFlowLayout& layout, std::span<const double> values, double tol) {
    const int T = layout.horizon;
    const std::size_t nodes = static_cast<std::size_t>(T) + 1;
    std::vector<double> out_m(nodes, 0.0), in_m(nodes, 0.0), out_s(nodes, 0.0), in_s(nodes, 0.0);
    std::vector<FlowResidual> bad;

    for (std::size_t c = 0; c < layout.classes.size(); ++c) {
        const JobClass& cls = layout.classes[c];
        double total = 0.0;
        for (std::size_t t = 0; t < layout.x[c].size(); ++t) {
            const double v = value_of(values, layout.x[c][t]);
            total += v;
            out_m[t] += v;
            out_s[t] += v;
            in_m[t + static_cast<std::size_t>(cls.span())] += v;
            in_s[t + static_cast<std::size_t>(cls.setup)] += v;
        }
        if (std::abs(total - cls.multiplicity) > tol)
            bad.push_back({'A', static_cast<int>(c), total - cls.multiplicity});
    }

    auto idle = [&](const std::vector<int>& vars, int t) { return t < 0 || t >= T ? 0.0 : value_of(values, vars[static_cast<std::size_t>(t)]); };
    auto sink = [&](int t) { return t < 1 ? 0.0 : value_of(values, layout.sink[static_cast<std::size_t>(t)]); };

    double sinks = 0.0;
    for (int t = 0; t <= T; ++t) {
        const auto k = static_cast<std::size_t>(t);
        const double z = sink(t);
        sinks += z;
        // out - in + idle_out - idle_in = -capacity*z (t > 0), = capacity (t = 0)
        const double source_m = t == 0 ? layout.machines : 0.0;
        const double source_s = t == 0 ? 1.0 : 0.0;
        const double res_m = out_m[k] - in_m[k] + idle(layout.idle_machine, t) - idle(layout.idle_machine, t - 1) +
                             layout.machines * z - source_m;
        const double res_s = out_s[k] - in_s[k] + idle(layout.idle_server, t) - idle(layout.idle_server, t - 1) + z -
                             source_s;
        if (std::abs(res_m) > tol) bad.push_back({'M', t, res_m});
        if (std::abs(res_s) > tol) bad.push_back({'S', t, res_s});
    }
    if (std::abs(sinks - 1.0) > tol) bad.push_back({'Z', 0, sinks - 1.0});
    return bad;
}

Schedule decode_flow(const ArcFlowLayout& layout, std::span<const double> values, const Instance& inst) {
    const int T = layout.horizon;
    constexpr double kIntTol = 1e-6;
    auto integral = [&](int var) {
        const double v = value_of(values, var);
        const double r = std::round(v);
        if (std::abs(v - r) > kIntTol)
            throw DecodeError(fmt::format("variable {} has non-integral value {}", var, v));
        return static_cast<int>(r);
    };

    std::vector<std::vector<int>> x_count(layout.classes.size());
    for (std::size_t c = 0; c < layout.classes.size(); ++c)
        for (int var : layout.x[c]) x_count[c].push_back(integral(var));
    std::vector<int> idle_count;
    for (int var : layout.idle_machine) idle_count.push_back(integral(var));
    for (int var : layout.idle_server) integral(var);
    int sink_node = -1;
    for (int t = 1; t <= T; ++t) {
        if (integral(layout.sink[static_cast<std::size_t>(t)]) == 1) {
            if (sink_node != -1) throw DecodeError(fmt::format("two sink nodes {} and {}", sink_node, t));
            sink_node = t;
        }
    }

    if (auto residuals = audit_flow(layout, values); !residuals.empty()) {
        const FlowResidual& r = residuals.front();
        throw DecodeError(fmt::format("flow imbalance in graph {} at node {}: residual {}", r.graph, r.node, r.residual));
    }
    if (sink_node == -1) throw DecodeError("no sink node");

    struct Path {
        int node = 0;
        std::vector<std::pair<int, int>> arcs;  // (class, start)
    };
    std::vector<Path> paths(static_cast<std::size_t>(layout.machines));
    while (true) {
        Path* current = nullptr;
        for (Path& p : paths)
            if (p.node < sink_node && (current == nullptr || p.node < current->node)) current = &p;
        if (current == nullptr) break;
        const int t = current->node;
        bool moved = false;
        for (std::size_t c = 0; c < layout.classes.size() && !moved; ++c) {
            if (t < static_cast<int>(x_count[c].size()) && x_count[c][static_cast<std::size_t>(t)] > 0) {
                --x_count[c][static_cast<std::size_t>(t)];
                current->arcs.emplace_back(static_cast<int>(c), t);
                current->node = t + layout.classes[c].span();
                moved = true;
            }
        }
        if (!moved && t < T && idle_count[static_cast<std::size_t>(t)] > 0) {
            --idle_count[static_cast<std::size_t>(t)];
            current->node = t + 1;
            moved = true;
        }
        if (!moved) throw DecodeError(fmt::format("path stuck at node {} before sink {}", t, sink_node));
        if (current->node > sink_node)
            throw DecodeError(fmt::format("path overshoots sink {} to node {}", sink_node, current->node));
    }
    for (std::size_t c = 0; c < x_count.size(); ++c)
        for (std::size_t t = 0; t < x_count[c].size(); ++t)
            if (x_count[c][t] != 0)
                throw DecodeError(fmt::format("execution arc ({}, {}) not covered by any machine path", c, t));

    // Occurrences of each class, ordered by start time then path index.
    std::vector<std::vector<std::pair<int, int>>> occurrences(layout.classes.size());
    for (std::size_t k = 0; k < paths.size(); ++k)
        for (auto [c, start] : paths[k].arcs)
            occurrences[static_cast<std::size_t>(c)].emplace_back(start, static_cast<int>(k) + 1);

    std::vector<Assignment> out;
    for (std::size_t c = 0; c < layout.classes.size(); ++c) {
        auto& occ = occurrences[c];
        std::sort(occ.begin(), occ.end());
        const JobClass& cls = layout.classes[c];
        if (occ.size() != cls.job_ids.size())
            throw DecodeError(fmt::format("class {} scheduled {} times, multiplicity {}", c, occ.size(),
                                          cls.job_ids.size()));
        for (std::size_t i = 0; i < occ.size(); ++i) {
            const Job& j = inst.job(cls.job_ids[i]);
            out.push_back(Assignment{j.id, occ[i].second, occ[i].first, j.setup, j.processing});
        }
    }
    return make_schedule(layout.machines, std::move(out));
}

}  // namespace pms
