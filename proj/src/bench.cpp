#include "pms/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "pms/arcflow.hpp"
#include "pms/tivi.hpp"

namespace pms {

std::string_view to_string(ModelKind model) {
    switch (model) {
        case ModelKind::FFF: return "FFF";
        case ModelKind::FFT: return "FFT";
        case ModelKind::FFTWarmed: return "FFT-Warmed";
        case ModelKind::TIVI: return "TIVI";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "fff") return ModelKind::FFF;
    if (lower == "fft") return ModelKind::FFT;
    if (lower == "fft-warm" || lower == "fft-warmed") return ModelKind::FFTWarmed;
    if (lower == "tivi") return ModelKind::TIVI;
    throw std::invalid_argument(fmt::format("unknown model '{}' (expected fff, fft, fft-warm or tivi)", text));
}

std::vector<ModelKind> parse_model_list(std::string_view comma_separated) {
    std::vector<ModelKind> models;
    std::size_t pos = 0;
    while (pos <= comma_separated.size()) {
        const std::size_t end = std::min(comma_separated.find(',', pos), comma_separated.size());
        std::string_view item = comma_separated.substr(pos, end - pos);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (!item.empty()) {
            const ModelKind kind = parse_model_kind(item);
            if (std::find(models.begin(), models.end(), kind) == models.end()) models.push_back(kind);
        }
        pos = end + 1;
    }
    if (models.empty()) throw std::invalid_argument("empty model list");
    return models;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ModelRun run_model(const Instance& inst, const BoundReport& bounds, ModelKind kind, const RunOptions& options) {
    ModelRun run;
    run.model = kind;
    const int T = static_cast<int>(bounds.ub);

    std::optional<FlowModel> flow;
    std::optional<TiviModel> tivi;
    const auto build_start = std::chrono::steady_clock::now();
    switch (kind) {
        case ModelKind::FFF: flow = build_fff(inst, T, true); break;
        case ModelKind::FFT:
        case ModelKind::FFTWarmed: flow = build_fft(inst, T); break;
        case ModelKind::TIVI: tivi = build_tivi(inst, T); break;
    }
    run.build_time = seconds_since(build_start);
    const MilpModel& milp = flow ? flow->milp : tivi->milp;
    run.var_count = milp.variable_count();
    run.constraint_count = milp.constraint_count();

    try {
        auto backend = make_backend(options.backend);
        if (options.compute_lp) {
            try {
                run.lp_bound = backend->solve_relaxation(milp);
            } catch (const RelaxationError& e) {
                run.message = e.what();
            }
        }

        if (options.skip_when_tight && bounds.ub == bounds.lb_better) {
            run.status = SolveStatus::Optimal;
            run.objective = static_cast<double>(bounds.ub);
            run.best_bound = static_cast<double>(bounds.ub);
            run.schedule = bounds.ub_witness;
            run.mip_skipped = true;
            return run;
        }

        std::vector<double> warm;
        if (kind == ModelKind::FFTWarmed) {
            warm = encode_schedule(*flow, bounds.ub_witness, inst);
            run.warm_start_objective = milp.objective_value(warm);
        }
        SolveOutcome outcome = backend->solve(milp, options.limits, warm);
        run.status = outcome.status;
        // Makespans are integral; drop solver round-off.
        run.objective = outcome.objective;
        if (run.objective && std::abs(*run.objective - std::round(*run.objective)) < 1e-6)
            run.objective = std::round(*run.objective);
        run.best_bound = outcome.best_bound;
        run.wall_time = outcome.wall_time;
        if (!outcome.message.empty()) run.message = outcome.message;
        if (outcome.has_incumbent()) {
            try {
                run.schedule = flow ? decode_flow(flow->layout, outcome.incumbent, inst)
                                    : decode_tivi(*tivi, outcome.incumbent, inst);
            } catch (const DecodeError& e) {
                run.message = std::string("decode failed: ") + e.what();
            }
        }
    } catch (const std::exception& e) {
        run.status = SolveStatus::Error;
        run.message = e.what();
    }
    return run;
}

BenchRecord make_record(const GenParams& params, int replication, const BoundReport& bounds, const ModelRun& run) {
    BenchRecord r;
    r.instance_id = instance_label(params, replication);
    r.n = params.n;
    r.m = params.m;
    r.alpha = params.alpha;
    r.rho = params.rho;
    r.replication = replication + 1;
    r.model = run.model;
    r.status = run.status;
    r.objective = run.objective;
    r.best_bound = run.best_bound;
    r.lp_bound = run.lp_bound;
    r.wall_time = run.wall_time;
    r.var_count = run.var_count;
    r.constraint_count = run.constraint_count;
    r.lb_better = bounds.lb_better;
    r.ub = bounds.ub;
    r.warm_start_objective = run.warm_start_objective;
    r.mip_skipped = run.mip_skipped;
    return r;
}

std::vector<BenchRecord> run_bench(const std::vector<GenParams>& grid, const std::vector<ModelKind>& models,
                                   const BenchOptions& options) {
    if (grid.empty()) throw std::invalid_argument("benchmark grid is empty");
    struct Task {
        std::size_t entry;
        int replication;
    };
    std::vector<Task> tasks;
    for (std::size_t e = 0; e < grid.size(); ++e) {
        validate(grid[e]);
        for (int r = 0; r < grid[e].replications; ++r) tasks.push_back({e, r});
    }

    std::vector<std::vector<BenchRecord>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const GenParams& params = grid[tasks[i].entry];
            const Instance inst = generate_one(params, tasks[i].replication);
            const BoundReport bounds = horizon_ub(inst);
            for (ModelKind kind : models)
                results[i].push_back(make_record(params, tasks[i].replication, bounds,
                                                 run_model(inst, bounds, kind, options.run)));
        }
    };
    const int workers = std::clamp(options.jobs, 1, static_cast<int>(tasks.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    std::vector<BenchRecord> records;
    for (auto& batch : results)
        for (auto& r : batch) records.push_back(std::move(r));
    return records;
}

std::optional<double> dev_cr(const BenchRecord& r) {
    if (r.status != SolveStatus::Optimal || !r.objective || !r.lp_bound || *r.lp_bound <= 0.0) return std::nullopt;
    return 100.0 * (*r.objective - *r.lp_bound) / *r.lp_bound;
}

std::optional<double> gap_bb(const BenchRecord& r) {
    if (r.status == SolveStatus::Optimal || !r.objective || *r.objective <= 0.0) return std::nullopt;
    return 100.0 * (*r.objective - r.best_bound) / *r.objective;
}

std::vector<IndicatorRow> indicators(const std::vector<BenchRecord>& records) {
    struct Sums {
        double cpu = 0, dev = 0, gap = 0;
        int dev_count = 0, gap_count = 0;
    };
    std::vector<IndicatorRow> rows;
    std::vector<std::map<ModelKind, Sums>> sums;
    for (const BenchRecord& r : records) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const IndicatorRow& row) {
            return row.n == r.n && row.m == r.m && row.alpha == r.alpha && row.rho == r.rho;
        });
        if (it == rows.end()) {
            rows.push_back(IndicatorRow{r.n, r.m, r.alpha, r.rho, {}});
            sums.emplace_back();
            it = rows.end() - 1;
        }
        const auto idx = static_cast<std::size_t>(it - rows.begin());
        ModelIndicators& ind = it->per_model[r.model];
        Sums& s = sums[idx][r.model];
        ++ind.replications;
        if (r.status == SolveStatus::Optimal) {
            ++ind.num_optimal;
            s.cpu += r.wall_time;
            if (auto d = dev_cr(r)) {
                s.dev += *d;
                ++s.dev_count;
            }
        } else if (!r.objective) {
            ++ind.num_no_integer;
        }
        if (auto g = gap_bb(r)) {
            s.gap += *g;
            ++s.gap_count;
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (auto& [model, ind] : rows[i].per_model) {
            const Sums& s = sums[i][model];
            if (ind.num_optimal > 0) ind.mean_cpu = s.cpu / ind.num_optimal;
            if (s.dev_count > 0) ind.mean_dev_cr = s.dev / s.dev_count;
            if (s.gap_count > 0) ind.mean_gap_bb = s.gap / s.gap_count;
        }
    }
    return rows;
}

std::string render_report(const std::vector<IndicatorRow>& rows, ReportFormat format,
                          const std::vector<ModelKind>& models) {
    std::vector<std::string> header = {"n", "m", "alpha", "rho"};
    for (ModelKind model : models)
        for (const char* col : {"#O", "#N", "CPU", "DEV_CR", "GAP_BB"})
            header.push_back(fmt::format("{} {}", to_string(model), col));

    std::vector<std::vector<std::string>> body;
    auto number = [](const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : std::string(); };
    for (const IndicatorRow& row : rows) {
        std::vector<std::string> cells = {fmt::format("{}", row.n), fmt::format("{}", row.m),
                                          fmt::format("{}", row.alpha), fmt::format("{}", row.rho)};
        for (ModelKind model : models) {
            auto it = row.per_model.find(model);
            if (it == row.per_model.end()) {
                cells.insert(cells.end(), 5, std::string());
                continue;
            }
            const ModelIndicators& ind = it->second;
            cells.push_back(fmt::format("{}", ind.num_optimal));
            cells.push_back(fmt::format("{}", ind.num_no_integer));
            cells.push_back(ind.num_optimal == 0 ? std::string("†") : number(ind.mean_cpu));
            cells.push_back(number(ind.mean_dev_cr));
            cells.push_back(number(ind.mean_gap_bb));
        }
        body.push_back(std::move(cells));
    }

    std::string out;
    if (format == ReportFormat::Csv) {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
            out += "\n";
        };
        line(header);
        for (const auto& cells : body) line(cells);
        return out;
    }
    auto line = [&](const std::vector<std::string>& cells) {
        out += "|";
        for (const std::string& c : cells) out += " " + c + " |";
        out += "\n";
    };
    line(header);
    out += "|";
    for (std::size_t i = 0; i < header.size(); ++i) out += "---:|";
    out += "\n";
    for (const auto& cells : body) line(cells);
    return out;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

}  // namespace

std::string records_csv(const std::vector<BenchRecord>& records) {
    std::string out =
        "instance,n,m,alpha,rho,replication,model,status,objective,best_bound,lp_bound,wall_time,var_count,"
        "constraint_count,lb_better,ub,warm_start_objective,mip_skipped\n";
    for (const BenchRecord& r : records)
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{:.6f},{},{},{},{},{},{}\n", r.instance_id, r.n, r.m,
                           r.alpha, r.rho, r.replication, to_string(r.model), to_string(r.status), opt(r.objective),
                           r.best_bound, opt(r.lp_bound), r.wall_time, r.var_count, r.constraint_count,
                           r.lb_better, r.ub, opt(r.warm_start_objective), r.mip_skipped ? 1 : 0);
    return out;
}

nlohmann::json to_json(const BenchRecord& r) {
    nlohmann::json doc = {{"instance", r.instance_id},
                          {"n", r.n},
                          {"m", r.m},
                          {"alpha", r.alpha},
                          {"rho", r.rho},
                          {"replication", r.replication},
                          {"model", to_string(r.model)},
                          {"status", to_string(r.status)},
                          {"wall_time", r.wall_time},
                          {"var_count", r.var_count},
                          {"constraint_count", r.constraint_count},
                          {"lb_better", r.lb_better},
                          {"ub", r.ub},
                          {"mip_skipped", r.mip_skipped}};
    auto put = [&](const char* key, const std::optional<double>& v) {
        doc[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    };
    put("objective", r.objective);
    put("lp_bound", r.lp_bound);
    put("warm_start_objective", r.warm_start_objective);
    doc["best_bound"] = std::isfinite(r.best_bound) ? nlohmann::json(r.best_bound) : nlohmann::json(nullptr);
    return doc;
}

std::string records_jsonl(const std::vector<BenchRecord>& records) {
    std::string out;
    for (const BenchRecord& r : records) out += to_json(r).dump() + "\n";
    return out;
}

}  // namespace pms
