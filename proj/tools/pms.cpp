// pms: command-line front end for the Pm|S1|Cmax models, bounds and benchmark.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "pms/arcflow.hpp"
#include "pms/bench.hpp"
#include "pms/bounds.hpp"
#include "pms/instance.hpp"
#include "pms/oracle.hpp"
#include "pms/schedule.hpp"
#include "pms/tivi.hpp"

namespace fs = std::filesystem;
using namespace pms;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct GenerateArgs {
    GenParams params;
    std::string grid;
    std::string out;
};

int cmd_generate(const GenerateArgs& a) {
    std::vector<GenParams> grid;
    if (!a.grid.empty()) {
        grid = benchmark_grid(parse_grid_scope(a.grid), a.params.seed);
        for (auto& g : grid) g.replications = a.params.replications;
    } else {
        grid.push_back(a.params);
    }
    int written = 0;
    for (const GenParams& params : grid) {
        validate(params);
        for (int r = 0; r < params.replications; ++r) {
            const Instance inst = generate_one(params, r);
            if (a.out.empty()) {
                std::cout << "# " << instance_label(params, r) << "\n" << render_instance(inst);
            } else {
                write_file(fs::path(a.out) / (instance_label(params, r) + ".txt"), render_instance(inst));
                ++written;
            }
        }
    }
    if (!a.out.empty()) std::cerr << fmt::format("wrote {} instances to {}\n", written, a.out);
    return 0;
}

nlohmann::json bounds_json(const BoundReport& b) {
    return {{"lb_trivial", fmt::format("{}/{}", b.lb_trivial_exact.numerator(), b.lb_trivial_exact.denominator())},
            {"lb_trivial_ceil", b.lb_trivial_int},
            {"lb_better", b.lb_better},
            {"ub", b.ub},
            {"heuristic", to_string(b.winning_heuristic)},
            {"rule", to_string(b.winning_rule)},
            {"witness", to_json(b.ub_witness)}};
}

int cmd_bounds(const std::string& path, bool json) {
    const Instance inst = read_instance_file(path);
    const BoundReport b = horizon_ub(inst);
    if (json) {
        std::cout << bounds_json(b).dump(2) << "\n";
        return 0;
    }
    std::cout << fmt::format("{:<12}{}/{} ({:.4f})\n", "lb_trivial", b.lb_trivial_exact.numerator(),
                             b.lb_trivial_exact.denominator(), to_double(b.lb_trivial_exact));
    std::cout << fmt::format("{:<12}{}\n", "lb_better", b.lb_better);
    std::cout << fmt::format("{:<12}{} ({} {})\n", "ub", b.ub, to_string(b.winning_heuristic),
                             to_string(b.winning_rule));
    return 0;
}

struct SolveArgs {
    std::string instance;
    std::string model = "fft";
    double time_limit = 3600.0;
    std::string backend;
    std::string export_path;
    std::string schedule_out;
    std::string svg_out;
    bool lp = false;
    bool json = false;
};

void export_model(const MilpModel& milp, const FlowModel* flow, const fs::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".mps")
        write_file(path, export_mps(milp));
    else if (ext == ".lp")
        write_file(path, export_lp(milp));
    else
        throw std::invalid_argument("export path must end in .lp or .mps");
    if (flow) {
        fs::path manifest = path;
        manifest.replace_extension(".manifest.json");
        write_file(manifest, flow->manifest().dump(2) + "\n");
    }
}

int cmd_solve(const SolveArgs& a) {
    const Instance inst = read_instance_file(a.instance);
    const BoundReport bounds = horizon_ub(inst);
    const ModelKind kind = parse_model_kind(a.model);

    if (!a.export_path.empty()) {
        const int T = static_cast<int>(bounds.ub);
        if (kind == ModelKind::TIVI) {
            export_model(build_tivi(inst, T).milp, nullptr, a.export_path);
        } else {
            const FlowModel flow = kind == ModelKind::FFF ? build_fff(inst, T, true) : build_fft(inst, T);
            export_model(flow.milp, &flow, a.export_path);
        }
    }

    RunOptions options;
    options.limits.time_limit = a.time_limit;
    if (!a.backend.empty()) options.backend = a.backend;
    options.compute_lp = a.lp;
    options.skip_when_tight = false;
    const ModelRun run = run_model(inst, bounds, kind, options);

    nlohmann::json doc = {{"model", to_string(run.model)},
                          {"status", to_string(run.status)},
                          {"horizon", bounds.ub},
                          {"lb_better", bounds.lb_better},
                          {"variables", run.var_count},
                          {"constraints", run.constraint_count},
                          {"wall_time", run.wall_time},
                          {"build_time", run.build_time}};
    doc["objective"] = run.objective ? nlohmann::json(*run.objective) : nlohmann::json(nullptr);
    doc["best_bound"] = std::isfinite(run.best_bound) ? nlohmann::json(run.best_bound) : nlohmann::json(nullptr);
    if (run.lp_bound) doc["lp_bound"] = *run.lp_bound;
    if (run.warm_start_objective) doc["warm_start_objective"] = *run.warm_start_objective;
    if (!run.message.empty()) doc["message"] = run.message;

    if (run.schedule) {
        const auto violations = validate(*run.schedule, inst);
        doc["schedule_valid"] = violations.empty();
        if (!a.schedule_out.empty()) write_file(a.schedule_out, to_json(*run.schedule).dump(2) + "\n");
        if (!a.svg_out.empty()) write_file(a.svg_out, gantt_svg(*run.schedule));
    }

    if (a.json) {
        std::cout << doc.dump(2) << "\n";
    } else {
        for (auto& [key, value] : doc.items()) std::cout << fmt::format("{:<22}{}\n", key, value.dump());
    }
    return run.status == SolveStatus::Error ? 1 : 0;
}

int cmd_oracle(const std::string& path, int cap, bool json) {
    const Instance inst = read_instance_file(path);
    if (inst.size() > cap) {
        std::cerr << fmt::format("error: oracle enumerates at most {} jobs (instance has {}); raise --cap to force\n",
                                 cap, inst.size());
        return 2;
    }
    const OracleResult r = brute_force(inst, cap);
    if (json) {
        std::cout << nlohmann::json{{"optimum", r.optimum},
                                    {"server_order", r.server_order},
                                    {"orders_evaluated", r.permutations_explored},
                                    {"witness", to_json(r.witness)}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    std::cout << fmt::format("optimum       {}\n", r.optimum);
    std::cout << fmt::format("server order  {}\n", fmt::join(r.server_order, " "));
    std::cout << fmt::format("evaluated     {} orders\n", r.permutations_explored);
    return 0;
}

struct BenchArgs {
    std::string grid = "small";
    std::string models = "fff,fft,fft-warm,tivi";
    int jobs = 1;
    double time_limit = 3600.0;
    int reps = 10;
    std::uint64_t seed = 1;
    std::string backend;
    std::string out = "bench";
    std::string format = "markdown";
    bool no_skip = false;
};

int cmd_bench(const BenchArgs& a) {
    std::vector<GenParams> grid = benchmark_grid(parse_grid_scope(a.grid), a.seed);
    for (auto& g : grid) g.replications = a.reps;
    const std::vector<ModelKind> models = parse_model_list(a.models);

    BenchOptions options;
    options.jobs = a.jobs;
    options.run.limits.time_limit = a.time_limit;
    options.run.skip_when_tight = !a.no_skip;
    if (!a.backend.empty()) options.run.backend = a.backend;

    const auto records = run_bench(grid, models, options);
    const ReportFormat format = a.format == "csv" ? ReportFormat::Csv : ReportFormat::Markdown;
    const std::string report = render_report(indicators(records), format, models);

    write_file(a.out + ".csv", records_csv(records));
    write_file(a.out + ".jsonl", records_jsonl(records));
    write_file(a.out + (format == ReportFormat::Csv ? ".report.csv" : ".report.md"), report);
    std::cout << report;
    return 0;
}

int cmd_gantt(const std::string& instance, const std::string& schedule, const std::string& out) {
    const Instance inst = read_instance_file(instance);
    const Schedule sched = schedule_from_json(nlohmann::json::parse(read_file(schedule)), inst);
    const auto violations = validate(sched, inst);
    for (const Violation& v : violations) std::cerr << fmt::format("{}: {}\n", v.rule, v.message);
    const std::string svg = gantt_svg(sched);
    if (out.empty())
        std::cout << svg;
    else
        write_file(out, svg);
    return violations.empty() ? 0 : 1;
}

int cmd_varcount(const std::string& scope, int reps, std::uint64_t seed, const std::string& out) {
    std::vector<GenParams> grid = benchmark_grid(parse_grid_scope(scope), seed);
    std::string csv = "instance,n,m,alpha,rho,horizon,classes,vars_ungrouped,vars_grouped,constraints_grouped\n";
    for (GenParams& g : grid) {
        g.replications = reps;
        for (int r = 0; r < reps; ++r) {
            const Instance inst = generate_one(g, r);
            const int T = static_cast<int>(horizon_ub(inst).ub);
            csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", instance_label(g, r), g.n, g.m, g.alpha, g.rho, T,
                               group_identical(inst).size(), count_variables(inst, T, false),
                               count_variables(inst, T, true), count_constraints(inst, T, true));
        }
    }
    if (out.empty())
        std::cout << csv;
    else
        write_file(out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Makespan minimisation on parallel machines with a single setup server"};
    app.set_config("--config", "", "key=value defaults file; options of a subcommand go under [name]");
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write random instances");
    generate->add_option("-n,--jobs", gen.params.n, "Number of jobs");
    generate->add_option("-m,--machines", gen.params.m, "Number of machines");
    generate->add_option("--alpha", gen.params.alpha);
    generate->add_option("--rho", gen.params.rho);
    generate->add_option("--seed", gen.params.seed);
    generate->add_option("--reps", gen.params.replications);
    generate->add_option("--grid", gen.grid, "small, medium, large or all");
    generate->add_option("-o,--out", gen.out, "Output directory (stdout if omitted)");

    std::string bounds_path;
    bool bounds_json_flag = false;
    auto* bounds = app.add_subcommand("bounds", "Lower bounds and heuristic upper bound");
    bounds->add_option("instance", bounds_path)->required()->check(CLI::ExistingFile);
    bounds->add_flag("--json", bounds_json_flag);

    SolveArgs sol;
    auto* solve = app.add_subcommand("solve", "Build and solve one model");
    solve->add_option("instance", sol.instance)->required()->check(CLI::ExistingFile);
    solve->add_option("--model", sol.model)->check(CLI::IsMember({"fff", "fft", "fft-warm", "tivi"}));
    solve->add_option("--time-limit", sol.time_limit, "Seconds");
    solve->add_option("--backend", sol.backend)->envname("PMS_BACKEND");
    solve->add_option("--export", sol.export_path, "Write the model to PATH (.lp or .mps)");
    solve->add_option("--schedule-out", sol.schedule_out, "Write the decoded schedule as JSON");
    solve->add_option("--svg", sol.svg_out, "Write a Gantt chart of the decoded schedule");
    solve->add_flag("--lp", sol.lp, "Also solve the LP relaxation");
    solve->add_flag("--json", sol.json);

    std::string oracle_path;
    int oracle_cap = 8;
    bool oracle_json = false;
    auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration (small n)");
    oracle->add_option("instance", oracle_path)->required()->check(CLI::ExistingFile);
    oracle->add_option("--cap", oracle_cap, "Largest n accepted");
    oracle->add_flag("--json", oracle_json);

    BenchArgs ben;
    auto* bench = app.add_subcommand("bench", "Run the benchmark grid and report indicators");
    bench->add_option("--grid", ben.grid)->check(CLI::IsMember({"small", "medium", "large", "all"}));
    bench->add_option("--models", ben.models, "Comma-separated: fff, fft, fft-warm, tivi");
    bench->add_option("--jobs", ben.jobs, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_option("--time-limit", ben.time_limit, "Seconds per solve");
    bench->add_option("--reps", ben.reps, "Replications per combination")->check(CLI::PositiveNumber);
    bench->add_option("--seed", ben.seed);
    bench->add_option("--backend", ben.backend)->envname("PMS_BACKEND");
    bench->add_option("-o,--out", ben.out, "Output prefix for .csv, .jsonl and the report");
    bench->add_option("--format", ben.format)->check(CLI::IsMember({"csv", "markdown"}));
    bench->add_flag("--no-skip", ben.no_skip, "Solve even when the heuristic meets lb_better");

    std::string gantt_instance, gantt_schedule, gantt_out;
    auto* gantt = app.add_subcommand("gantt", "Validate a schedule JSON and draw it as SVG");
    gantt->add_option("instance", gantt_instance)->required()->check(CLI::ExistingFile);
    gantt->add_option("schedule", gantt_schedule)->required()->check(CLI::ExistingFile);
    gantt->add_option("-o,--out", gantt_out);

    std::string vc_grid = "small", vc_out;
    int vc_reps = 10;
    std::uint64_t vc_seed = 1;
    auto* varcount = app.add_subcommand("varcount", "Grouped vs ungrouped variable counts as CSV");
    varcount->add_option("--grid", vc_grid)->check(CLI::IsMember({"small", "medium", "large", "all"}));
    varcount->add_option("--reps", vc_reps)->check(CLI::PositiveNumber);
    varcount->add_option("--seed", vc_seed);
    varcount->add_option("-o,--out", vc_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) return cmd_generate(gen);
        if (*bounds) return cmd_bounds(bounds_path, bounds_json_flag);
        if (*solve) return cmd_solve(sol);
        if (*oracle) return cmd_oracle(oracle_path, oracle_cap, oracle_json);
        if (*bench) return cmd_bench(ben);
        if (*gantt) return cmd_gantt(gantt_instance, gantt_schedule, gantt_out);
        if (*varcount) return cmd_varcount(vc_grid, vc_reps, vc_seed, vc_out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
