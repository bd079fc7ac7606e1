#include "pms/tivi.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pms/arcflow.hpp"
#include "pms/bounds.hpp"

namespace pms {

TiviModel build_tivi(const Instance& inst, int horizon) {
    if (horizon < inst.max_span())
        throw HorizonError(fmt::format("horizon {} is shorter than the longest job ({})", horizon, inst.max_span()));
    TiviModel model;
    MilpModel& milp = model.milp;
    TiviLayout& layout = model.layout;
    layout.horizon = horizon;
    const int T = horizon;

    for (const Job& j : inst.jobs) {
        auto& row = layout.x.emplace_back();
        for (int t = 0; t <= T; ++t)
            row.push_back(milp.add_variable(fmt::format("x_{}_{}", j.id, t), VarKind::Binary, 0, 1));
    }
    layout.cmax = milp.add_variable("Cmax", VarKind::Continuous, 0, kInfinity, 1.0);

    for (const Job& j : inst.jobs) {
        std::vector<Term> terms;
        for (int var : layout.x[static_cast<std::size_t>(j.id - 1)]) terms.push_back({var, 1.0});
        milp.add_constraint(fmt::format("assign_{}", j.id), std::move(terms), RowSense::Equal, 1.0);
    }
    auto window_row = [&](const char* prefix, int t, auto length, double cap) {
        std::vector<Term> terms;
        for (const Job& j : inst.jobs) {
            const auto& row = layout.x[static_cast<std::size_t>(j.id - 1)];
            for (int start = std::max(0, t - length(j) + 1); start <= t; ++start)
                terms.push_back({row[static_cast<std::size_t>(start)], 1.0});
        }
        milp.add_constraint(fmt::format("{}_{}", prefix, t), std::move(terms), RowSense::LessEqual, cap);
    };
    for (int t = 0; t <= T; ++t)
        window_row("machine", t, [](const Job& j) { return j.span(); }, static_cast<double>(inst.machines));
    for (int t = 0; t <= T; ++t) window_row("server", t, [](const Job& j) { return j.setup; }, 1.0);
    for (const Job& j : inst.jobs) {
        std::vector<Term> terms;
        const auto& row = layout.x[static_cast<std::size_t>(j.id - 1)];
        for (int t = 0; t <= T; ++t) terms.push_back({row[static_cast<std::size_t>(t)], static_cast<double>(t + j.span())});
        terms.push_back({layout.cmax, -1.0});
        milp.add_constraint(fmt::format("cmax_{}", j.id), std::move(terms), RowSense::LessEqual, 0.0);
    }
    return model;
}

Schedule decode_tivi(const TiviModel& model, std::span<const double> values, const Instance& inst) {
    std::vector<std::pair<int, int>> starts;
    for (const Job& j : inst.jobs) {
        const auto& row = model.layout.x[static_cast<std::size_t>(j.id - 1)];
        int found = -1;
        for (std::size_t t = 0; t < row.size(); ++t) {
            if (values[static_cast<std::size_t>(row[t])] > 0.5) {
                if (found != -1) throw DecodeError(fmt::format("job {} starts twice", j.id));
                found = static_cast<int>(t);
            }
        }
        if (found == -1) throw DecodeError(fmt::format("job {} has no start", j.id));
        starts.emplace_back(j.id, found);
    }
    try {
        return schedule_from_starts(inst, starts);
    } catch (const std::invalid_argument& e) {
        throw DecodeError(e.what());
    }
}

double percent_vs_trivial(const Instance& inst, double bound) {
    const double trivial = to_double(lb_trivial(inst));
    return 100.0 * (bound - trivial) / trivial;
}

RelaxationReport tivi_relaxation_report(const Instance& inst, int horizon) {
    const TiviModel model = build_tivi(inst, horizon);
    RelaxationReport report;
    report.lp = solve_relaxation(model.milp);
    report.vs_trivial = percent_vs_trivial(inst, report.lp);
    return report;
}

}  // namespace pms
