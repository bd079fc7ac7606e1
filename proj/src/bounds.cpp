#include "pms/bounds.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace pms {

std::int64_t ceil(const Rational& r) {
    const std::int64_t q = r.numerator() / r.denominator();
    return q + (r.numerator() % r.denominator() > 0 ? 1 : 0);
}

double to_double(const Rational& r) { return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()); }

std::string_view to_string(PriorityRule rule) {
    switch (rule) {
        case PriorityRule::SPT: return "SPT";
        case PriorityRule::LPT: return "LPT";
        case PriorityRule::SST: return "SST";
        case PriorityRule::LST: return "LST";
        case PriorityRule::SCT: return "SCT";
        case PriorityRule::LCT: return "LCT";
    }
    return "?";
}

std::string_view to_string(Heuristic h) { return h == Heuristic::HS1 ? "HS1" : "HS2"; }

Rational lb_trivial(const Instance& inst) { return Rational(inst.total_work(), inst.machines); }

std::int64_t lb_better(const Instance& inst) {
    const std::int64_t m = inst.machines;
    int min_p = inst.jobs.front().processing;
    for (const Job& j : inst.jobs) min_p = std::min(min_p, j.processing);
    const std::int64_t server_bound = inst.total_setup() + min_p;

    std::vector<int> setups;
    for (const Job& j : inst.jobs) setups.push_back(j.setup);
    std::sort(setups.begin(), setups.end());
    std::int64_t weighted = 0;
    for (std::int64_t k = 1; k <= std::min<std::int64_t>(m - 1, inst.size()); ++k)
        weighted += (m - k) * setups[static_cast<std::size_t>(k - 1)];
    const Rational machine_bound = lb_trivial(inst) + Rational(weighted, m);
    return std::max(server_bound, ceil(machine_bound));
}

std::vector<int> order_jobs(const Instance& inst, PriorityRule rule) {
    // Sort key: ascending tuple; "longest" rules negate their keys.
    auto key = [rule](const Job& j) -> std::tuple<int, int, int> {
        switch (rule) {
            case PriorityRule::SPT: return {j.processing, j.setup, j.id};
            case PriorityRule::LPT: return {-j.processing, -j.setup, j.id};
            case PriorityRule::SST: return {j.setup, j.processing, j.id};
            case PriorityRule::LST: return {-j.setup, -j.processing, j.id};
            case PriorityRule::SCT: return {j.span(), j.processing, j.id};
            case PriorityRule::LCT: return {-j.span(), -j.processing, j.id};
        }
        return {0, 0, j.id};
    };
    std::vector<Job> jobs = inst.jobs;
    std::sort(jobs.begin(), jobs.end(), [&](const Job& a, const Job& b) { return key(a) < key(b); });
    std::vector<int> ids;
    ids.reserve(jobs.size());
    for (const Job& j : jobs) ids.push_back(j.id);
    return ids;
}

namespace {

// Server plus machine availability while dispatching.
struct Resources {
    int server_free = 0;
    std::vector<int> machine_free;

    explicit Resources(int m) : machine_free(static_cast<std::size_t>(m), 0) {}

    std::size_t earliest_machine() const {
        return static_cast<std::size_t>(std::min_element(machine_free.begin(), machine_free.end()) -
                                        machine_free.begin());
    }
    int next_start() const { return std::max(server_free, machine_free[earliest_machine()]); }

    Assignment dispatch(const Job& j) {
        const std::size_t k = earliest_machine();
        const int start = next_start();
        server_free = start + j.setup;
        machine_free[k] = start + j.span();
        return Assignment{j.id, static_cast<int>(k) + 1, start, j.setup, j.processing};
    }
};

}  // namespace

Schedule greedy_hs1(const Instance& inst, PriorityRule rule) {
    Resources res(inst.machines);
    std::vector<Assignment> out;
    for (int id : order_jobs(inst, rule)) out.push_back(res.dispatch(inst.job(id)));
    return make_schedule(inst.machines, std::move(out));
}

int hs2_lookahead(int n) { return n / 10 + 1; }

Schedule greedy_hs2(const Instance& inst, PriorityRule rule) {
    std::vector<int> pending = order_jobs(inst, rule);
    const std::size_t q = static_cast<std::size_t>(hs2_lookahead(inst.size()));
    Resources res(inst.machines);
    std::vector<Assignment> out;
    while (!pending.empty()) {
        std::size_t best = 0;
        int best_next = 0;
        for (std::size_t i = 0; i < std::min(q, pending.size()); ++i) {
            Resources trial = res;
            trial.dispatch(inst.job(pending[i]));
            const int next = trial.next_start();
            if (i == 0 || next < best_next) {
                best = i;
                best_next = next;
            }
        }
        out.push_back(res.dispatch(inst.job(pending[best])));
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return make_schedule(inst.machines, std::move(out));
}

BoundReport horizon_ub(const Instance& inst) {
    BoundReport report;
    report.lb_trivial_exact = lb_trivial(inst);
    report.lb_trivial_int = ceil(report.lb_trivial_exact);
    report.lb_better = lb_better(inst);
    bool first = true;
    for (Heuristic h : {Heuristic::HS1, Heuristic::HS2}) {
        for (PriorityRule rule : kAllRules) {
            Schedule s = h == Heuristic::HS1 ? greedy_hs1(inst, rule) : greedy_hs2(inst, rule);
            if (first || s.makespan < report.ub) {
                report.ub = s.makespan;
                report.ub_witness = std::move(s);
                report.winning_heuristic = h;
                report.winning_rule = rule;
                first = false;
            }
        }
    }
    return report;
}

}  // namespace pms
