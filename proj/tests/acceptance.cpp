// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff every
// gating criterion passes.
//
// PMS_ACCEPT_FULL=1 runs the larger-scale spot check (criterion 7) with all ten
// replications instead of one per combination.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pms/arcflow.hpp"
#include "pms/bench.hpp"
#include "pms/bounds.hpp"
#include "pms/instance.hpp"
#include "pms/oracle.hpp"
#include "pms/schedule.hpp"
#include "pms/tivi.hpp"

using namespace pms;

namespace {

struct Criterion {
    int id = 0;
    std::string title;
    bool gating = true;
    bool pass = true;
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures.size() < 10) failures.push_back(what);
    }
};

std::vector<Criterion> results;

void report(const Criterion& c, double seconds) {
    const char* tag = c.pass ? "PASS" : (c.gating ? "FAIL" : "MISS");
    std::cout << fmt::format("[{}] {}. {} ({:.1f} s){}\n", tag, c.id, c.title, seconds,
                             c.gating ? "" : " [not gating]");
    for (const std::string& n : c.notes) std::cout << "       " << n << "\n";
    for (const std::string& f : c.failures) std::cout << "       failure: " << f << "\n";
    std::cout.flush();
}

template <typename Body>
void run_criterion(int id, std::string title, bool gating, Body body) {
    Criterion c;
    c.id = id;
    c.title = std::move(title);
    c.gating = gating;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    report(c, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    results.push_back(std::move(c));
}

// (alpha, rho) rows of the n = 10 / n = 20 benchmark tables.
const std::vector<std::pair<double, double>> kSmallRows = {{0.1, 0.5}, {0.1, 1.0}, {0.3, 0.5},
                                                           {0.3, 0.7}, {0.5, 0.7}, {0.5, 1.0}};

struct SuiteInstance {
    std::string label;
    Instance inst;
};

// Optimal makespans found while running the suites, shared by criteria 5 and 6.
struct Solved {
    std::string label;
    Instance inst;
    BoundReport bounds;
    std::map<ModelKind, std::optional<int>> optimum;  // nullopt when not proven optimal
    std::optional<int> oracle;
    bool fft_infeasible = false;
};
std::vector<Solved> solved;

RunOptions exact_options() {
    RunOptions o;
    o.compute_lp = false;
    o.skip_when_tight = false;
    return o;
}

// Solves `kind`, checks the decoded schedule and returns the optimum.
std::optional<int> solve_checked(Criterion& c, const std::string& label, const Instance& inst,
                                 const BoundReport& bounds, ModelKind kind, bool* infeasible = nullptr) {
    const ModelRun run = run_model(inst, bounds, kind, exact_options());
    if (infeasible != nullptr) *infeasible = run.status == SolveStatus::Infeasible;
    if (run.status != SolveStatus::Optimal || !run.objective) {
        c.require(false, fmt::format("{} {}: status {} ({})", label, to_string(kind), to_string(run.status),
                                     run.message));
        return std::nullopt;
    }
    const int value = static_cast<int>(std::lround(*run.objective));
    c.require(std::abs(*run.objective - value) < 1e-9,
              fmt::format("{} {}: non-integral objective {}", label, to_string(kind), *run.objective));
    if (!run.schedule) {
        c.require(false, fmt::format("{} {}: incumbent could not be decoded: {}", label, to_string(kind),
                                     run.message));
    } else {
        c.require(validate(*run.schedule, inst).empty(),
                  fmt::format("{} {}: decoded schedule is infeasible", label, to_string(kind)));
        c.require(run.schedule->makespan == value,
                  fmt::format("{} {}: decoded makespan {} != objective {}", label, to_string(kind),
                              run.schedule->makespan, value));
    }
    return value;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean(v);
    double sum = 0.0;
    for (double x : v) sum += (x - mu) * (x - mu);
    return std::sqrt(sum / static_cast<double>(v.size() - 1));
}

// ---------------------------------------------------------------------------

void oracle_equivalence(Criterion& c) {
    int count = 0;
    for (int n = 3; n <= 7; ++n) {
        for (int m : {2, 3}) {
            for (auto [alpha, rho] : kSmallRows) {
                GenParams g{n, m, alpha, rho, 101, 4};
                for (int r = 0; r < g.replications; ++r) {
                    Solved s;
                    s.label = instance_label(g, r);
                    s.inst = generate_one(g, r);
                    s.bounds = horizon_ub(s.inst);
                    s.oracle = brute_force(s.inst).optimum;
                    for (ModelKind kind : {ModelKind::FFF, ModelKind::FFT, ModelKind::TIVI}) {
                        bool infeasible = false;
                        s.optimum[kind] = solve_checked(c, s.label, s.inst, s.bounds, kind,
                                                        kind == ModelKind::FFT ? &infeasible : nullptr);
                        if (kind == ModelKind::FFT) s.fft_infeasible = infeasible;
                        c.require(s.optimum[kind] == s.oracle,
                                  fmt::format("{}: {} = {} but oracle = {}", s.label, to_string(kind),
                                              s.optimum[kind] ? std::to_string(*s.optimum[kind]) : "none",
                                              *s.oracle));
                    }
                    solved.push_back(std::move(s));
                    ++count;
                }
            }
        }
    }
    c.require(count >= 200, fmt::format("only {} instances", count));
    c.notes.push_back(fmt::format("{} instances, n in 3..7, m in {{2, 3}}, six (alpha, rho) rows", count));
}

void five_job_example(Criterion& c) {
    const Instance inst = make_instance(3, {{2, 3}, {3, 5}, {3, 4}, {2, 5}, {2, 3}});
    c.require(lb_trivial(inst) == Rational(32, 3), "lb_trivial != 32/3");
    c.require(lb_better(inst) == 15, fmt::format("lb_better = {} != 15", lb_better(inst)));

    Solved s;
    s.label = "five-job example";
    s.inst = inst;
    s.bounds = horizon_ub(inst);
    for (ModelKind kind : {ModelKind::FFF, ModelKind::FFT, ModelKind::TIVI}) {
        s.optimum[kind] = solve_checked(c, s.label, inst, s.bounds, kind, kind == ModelKind::FFT ? &s.fft_infeasible : nullptr);
        c.require(s.optimum[kind] == 15, fmt::format("{} optimum is not 15", to_string(kind)));
    }
    // Same models over the horizon T = 18 used in the worked counts.
    for (bool grouped : {false, true}) {
        const FlowModel model = build_fff(inst, 18, grouped);
        c.require(model.milp.variable_count() == (grouped ? 103 : 117),
                  fmt::format("T = 18 variable count {}", model.milp.variable_count()));
        const SolveOutcome out = solve(model.milp);
        c.require(out.objective && std::lround(*out.objective) == 15, "FFF over T = 18 is not 15");
    }
    c.require(build_fff(inst, 18, false).milp.constraint_count() == 43, "T = 18 constraint count != 43");
    const TiviModel tivi = build_tivi(inst, 18);
    const SolveOutcome tout = solve(tivi.milp);
    c.require(tout.objective && std::lround(*tout.objective) == 15, "TIVI over T = 18 is not 15");

    const Schedule witness = dispatch_order(inst, {2, 4, 3, 1, 5});
    c.require(validate(witness, inst).empty() && witness.makespan == 15, "witness order (2,4,3,1,5) is not 15");
    const OracleResult oracle = brute_force(inst);
    s.oracle = oracle.optimum;
    c.require(oracle.optimum == 15, "oracle optimum != 15");

    const Schedule example = make_schedule(
        3, {{1, 1, 0, 2, 3}, {2, 2, 2, 3, 5}, {3, 1, 5, 3, 4}, {5, 3, 8, 2, 3}, {4, 2, 10, 2, 5}});
    c.require(validate(example, inst).empty(), "the C = 17 example schedule is rejected");
    c.require(example.makespan == 17, "example makespan != 17");
    c.notes.push_back("lb_trivial = 32/3, lb_better = 15, FFF = FFT = TIVI = oracle = 15, example C = 17 valid");
    solved.push_back(std::move(s));
}

void property_one(Criterion& c) {
    std::vector<GenParams> grid = benchmark_grid(GridScope::Small, 202);
    for (GenParams g : benchmark_grid(GridScope::Medium, 202)) {
        g.n = 30;  // medium patterns at reduced n
        grid.push_back(g);
    }
    std::vector<double> fff_gap, tivi_gap;
    int count = 0;
    int violations = 0;
    for (const GenParams& g : grid) {
        for (int r = 0; r < g.replications; ++r) {
            const Instance inst = generate_one(g, r);
            const BoundReport b = horizon_ub(inst);
            const int T = static_cast<int>(b.ub);
            const double trivial = to_double(b.lb_trivial_exact);
            const double fff_lp = solve_relaxation(build_fff(inst, T, true).milp);
            const double tivi_lp = solve_relaxation(build_tivi(inst, T).milp);
            if (fff_lp < trivial - 1e-6) {
                ++violations;
                c.require(false, fmt::format("{}: FFF LP {} < lb_trivial {}", instance_label(g, r), fff_lp, trivial));
            }
            fff_gap.push_back(percent_vs_trivial(inst, fff_lp));
            tivi_gap.push_back(percent_vs_trivial(inst, tivi_lp));
            ++count;

            Solved s;
            s.label = instance_label(g, r);
            s.inst = inst;
            s.bounds = b;
            solved.push_back(std::move(s));
        }
    }
    c.require(count == 300, fmt::format("{} instances instead of 300", count));
    c.notes.push_back(fmt::format("{} instances (n = 10, 20, 50 grid plus medium patterns at n = 30), {} below lb_trivial",
                                  count, violations));
    c.notes.push_back(fmt::format("FFF LP vs lb_trivial: mean {:+.2f}% (sd {:.2f})   [reference: +2.8%]",
                                  mean(fff_gap), stddev(fff_gap)));
    c.notes.push_back(fmt::format("TIVI LP vs lb_trivial: mean {:+.2f}% (sd {:.2f})   [reference: -37%, sd 9.5]",
                                  mean(tivi_gap), stddev(tivi_gap)));
    const bool signs = mean(fff_gap) >= 0.0 && mean(tivi_gap) < 0.0;
    c.notes.push_back(std::string("aggregate signs ") + (signs ? "match" : "do NOT match") + " (reported only)");
}

void grouping_invariance(Criterion& c) {
    int count = 0;
    int with_duplicates = 0;
    const std::vector<int> sizes = {6, 7, 8, 9, 10, 11, 12};
    for (int k = 0; count < 50; ++k) {
        const int n = sizes[static_cast<std::size_t>(k) % sizes.size()];
        const int m = 2 + k % 3;
        const double rho = std::array{0.5, 0.7, 1.0}[static_cast<std::size_t>(k / 7) % 3];
        GenParams g{n, m, 0.1, rho, 303, 1};
        const int r = k / 21;
        Solved s;
        s.label = instance_label(g, r);
        s.inst = generate_one(g, r);
        s.bounds = horizon_ub(s.inst);
        const int T = static_cast<int>(s.bounds.ub);

        const long long plain_vars = count_variables(s.inst, T, false);
        const long long grouped_vars = count_variables(s.inst, T, true);
        const bool dup = group_identical(s.inst).size() < static_cast<std::size_t>(n);
        with_duplicates += dup ? 1 : 0;
        c.require(grouped_vars <= plain_vars, s.label + ": grouped model is larger");
        if (dup) c.require(grouped_vars < plain_vars, s.label + ": duplicates but no reduction");

        const FlowModel plain = build_fff(s.inst, T, false);
        c.require(plain.milp.variable_count() == plain_vars, s.label + ": builder disagrees with count_variables");
        const SolveOutcome a = solve(plain.milp);
        s.optimum[ModelKind::FFF] = solve_checked(c, s.label, s.inst, s.bounds, ModelKind::FFF);
        s.optimum[ModelKind::FFT] = solve_checked(c, s.label, s.inst, s.bounds, ModelKind::FFT, &s.fft_infeasible);
        c.require(a.status == SolveStatus::Optimal && a.objective &&
                      s.optimum[ModelKind::FFF] && std::lround(*a.objective) == *s.optimum[ModelKind::FFF],
                  s.label + ": grouped and ungrouped optima differ");
        if (n <= 8) s.oracle = brute_force(s.inst).optimum;
        solved.push_back(std::move(s));
        ++count;
    }
    c.notes.push_back(fmt::format("{} instances with alpha = 0.1, n in 6..12, {} with duplicate jobs", count,
                                  with_duplicates));
}

void bound_sandwich(Criterion& c) {
    int with_optimum = 0;
    for (const Solved& s : solved) {
        const BoundReport& b = s.bounds;
        c.require(b.lb_trivial_int <= b.lb_better, s.label + ": ceil(lb_trivial) > lb_better");
        c.require(b.lb_better <= b.ub, s.label + ": lb_better > ub");
        c.require(validate(b.ub_witness, s.inst).empty(), s.label + ": ub witness is infeasible");
        c.require(b.ub_witness.makespan == b.ub, s.label + ": ub differs from witness makespan");
        std::optional<int> opt = s.oracle;
        for (const auto& [kind, value] : s.optimum)
            if (!opt && value) opt = value;
        if (opt) {
            ++with_optimum;
            c.require(b.lb_better <= *opt && *opt <= b.ub,
                      fmt::format("{}: optimum {} outside [{}, {}]", s.label, *opt, b.lb_better, b.ub));
        }
    }
    c.notes.push_back(fmt::format("{} instances, {} with a proven optimum", solved.size(), with_optimum));
}

void fft_soundness(Criterion& c) {
    int compared = 0;
    for (const Solved& s : solved) {
        auto fff = s.optimum.find(ModelKind::FFF);
        auto fft = s.optimum.find(ModelKind::FFT);
        if (fft != s.optimum.end()) c.require(!s.fft_infeasible, s.label + ": FFT reported infeasible");
        if (fff == s.optimum.end() || fft == s.optimum.end()) continue;
        ++compared;
        c.require(fff->second && fft->second && *fff->second == *fft->second,
                  s.label + ": FFT optimum differs from FFF");
    }
    c.require(compared > 0, "no instance had both models solved");
    c.notes.push_back(fmt::format("{} instances solved with both FFF and FFT", compared));
}

void larger_scale(Criterion& c) {
    const char* full = std::getenv("PMS_ACCEPT_FULL");
    const int reps = full != nullptr && std::string(full) == "1" ? 10 : 1;
    RunOptions options;
    options.limits.time_limit = 600.0;
    options.compute_lp = false;
    options.skip_when_tight = false;
    int optimal = 0, total = 0;
    std::vector<double> times;
    for (auto [alpha, rho] : kSmallRows) {
        GenParams g{20, 3, alpha, rho, 1, reps};
        for (int r = 0; r < reps; ++r) {
            const Instance inst = generate_one(g, r);
            const BoundReport b = horizon_ub(inst);
            const ModelRun run = run_model(inst, b, ModelKind::FFT, options);
            ++total;
            if (run.status == SolveStatus::Optimal) {
                ++optimal;
                times.push_back(run.wall_time);
            }
            c.require(run.status == SolveStatus::Optimal,
                      fmt::format("{}: {} after {:.1f} s", instance_label(g, r), to_string(run.status), run.wall_time));
            c.notes.push_back(fmt::format("{}: {} obj {} in {:.2f} s", instance_label(g, r), to_string(run.status),
                                          run.objective ? fmt::format("{}", *run.objective) : "-", run.wall_time));
        }
    }
    c.notes.push_back(fmt::format("{}/{} optimal within 600 s, mean {:.2f} s over optimal solves "
                                  "(reference times come from a different solver and machine)",
                                  optimal, total, mean(times)));
}

void indicator_fidelity(Criterion& c) {
    // Hand-built records: the footnote rules in isolation.
    auto rec = [](ModelKind model, SolveStatus status, std::optional<double> obj, double bound) {
        BenchRecord r;
        r.n = 100;
        r.m = 5;
        r.alpha = 0.1;
        r.rho = 0.5;
        r.model = model;
        r.status = status;
        r.objective = obj;
        r.best_bound = bound;
        r.lp_bound = 90.0;
        r.wall_time = 3.0;
        return r;
    };
    const std::vector<BenchRecord> records = {
        rec(ModelKind::FFT, SolveStatus::Optimal, 100.0, 100.0),
        rec(ModelKind::FFT, SolveStatus::Optimal, 100.0, 100.0),
        rec(ModelKind::TIVI, SolveStatus::Feasible, 120.0, 96.0),
        rec(ModelKind::TIVI, SolveStatus::TimeLimitNoSolution, std::nullopt, 95.0),
        rec(ModelKind::FFF, SolveStatus::TimeLimitNoSolution, std::nullopt, 95.0),
    };
    const std::vector<ModelKind> models = {ModelKind::FFF, ModelKind::FFT, ModelKind::TIVI};
    const std::string golden =
        "n,m,alpha,rho,FFF #O,FFF #N,FFF CPU,FFF DEV_CR,FFF GAP_BB,FFT #O,FFT #N,FFT CPU,FFT DEV_CR,FFT GAP_BB,"
        "TIVI #O,TIVI #N,TIVI CPU,TIVI DEV_CR,TIVI GAP_BB\n"
        "100,5,0.1,0.5,0,1,†,,,2,0,3.00,11.11,,0,1,†,,20.00\n";
    const std::string csv = render_report(indicators(records), ReportFormat::Csv, models);
    c.require(csv == golden, "golden CSV mismatch:\n" + csv);

    // A real forced timeout.
    GenParams g{150, 5, 0.5, 0.5, 1, 1};
    const Instance inst = generate_one(g, 0);
    const BoundReport b = horizon_ub(inst);
    RunOptions options;
    options.limits.time_limit = 0.01;
    options.compute_lp = false;
    options.skip_when_tight = false;
    std::vector<BenchRecord> timed;
    for (ModelKind kind : {ModelKind::FFT, ModelKind::TIVI}) {
        const ModelRun run = run_model(inst, b, kind, options);
        c.require(run.status == SolveStatus::Feasible || run.status == SolveStatus::NoIntegerSolution ||
                      run.status == SolveStatus::TimeLimitNoSolution,
                  fmt::format("{} under 0.01 s: status {}", to_string(kind), to_string(run.status)));
        timed.push_back(make_record(g, 0, b, run));
        c.notes.push_back(fmt::format("{} at 0.01 s: {}", to_string(kind), to_string(run.status)));
    }
    const auto rows = indicators(timed);
    const std::string out = render_report(rows, ReportFormat::Csv, {ModelKind::FFT, ModelKind::TIVI});
    const auto line = out.substr(out.find('\n') + 1);
    std::vector<std::string> cells;
    std::size_t pos = 0;
    for (std::size_t next; (next = line.find_first_of(",\n", pos)) != std::string::npos; pos = next + 1)
        cells.push_back(line.substr(pos, next - pos));
    c.require(cells.size() == 14, "unexpected column count");
    for (std::size_t k = 0; k < 2 && cells.size() == 14; ++k) {
        const BenchRecord& r = timed[k];
        const std::size_t base = 4 + 5 * k;
        c.require(cells[base] == "0", "#O not 0");
        c.require(cells[base + 1] == (r.objective ? "0" : "1"), "#N does not count the missing incumbent");
        c.require(cells[base + 2] == "†", "CPU is not † without optimal solves");
        c.require(cells[base + 3].empty(), "DEV_CR not blank without optimal solves");
        c.require(cells[base + 4].empty() != r.objective.has_value(), "GAP_BB presence does not follow the incumbent");
    }
    c.notes.push_back("golden CSV matches; timed-out rows: " + line.substr(0, line.size() - 1));
}

}  // namespace

int main() {
    std::cout << "pms acceptance suite\n";
    run_criterion(1, "Oracle equivalence: FFF = FFT = TIVI = brute force", true, oracle_equivalence);
    run_criterion(2, "Five-job example: exact bounds and optimum 15", true, five_job_example);
    run_criterion(3, "FFF LP relaxation never below lb_trivial", true, property_one);
    run_criterion(4, "Grouping invariance and variable reduction", true, grouping_invariance);
    run_criterion(5, "Bound sandwich lb_trivial <= lb_better <= optimum <= ub", true, bound_sandwich);
    run_criterion(6, "FFT soundness: FFT optimum = FFF optimum", true, fft_soundness);
    run_criterion(7, "n = 20, m = 3 solved by FFT within 600 s", false, larger_scale);
    run_criterion(8, "Indicator rendering under forced timeout", true, indicator_fidelity);

    int failed = 0;
    for (const Criterion& c : results)
        if (c.gating && !c.pass) ++failed;
    std::cout << fmt::format("{} of {} gating criteria passed\n",
                             std::count_if(results.begin(), results.end(), [](const Criterion& c) { return c.gating; }) - failed,
                             std::count_if(results.begin(), results.end(), [](const Criterion& c) { return c.gating; }));
    return failed == 0 ? 0 : 1;
}
