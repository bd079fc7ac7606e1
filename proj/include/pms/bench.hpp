#pragma once

// Model runner and benchmark harness: per-instance records and the summary
// indicators #O, #N, CPU, DEV_CR and GAP_BB.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pms/bounds.hpp"
#include "pms/instance.hpp"
#include "pms/milp.hpp"
#include "pms/schedule.hpp"

namespace pms {

enum class ModelKind { FFF, FFT, FFTWarmed, TIVI };

std::string_view to_string(ModelKind model);
/// Accepts fff, fft, fft-warm (or fft-warmed) and tivi, case-insensitive.
ModelKind parse_model_kind(std::string_view text);
std::vector<ModelKind> parse_model_list(std::string_view comma_separated);

struct RunOptions {
    SolveLimits limits;
    std::string backend = default_backend_name();
    bool compute_lp = true;
    /// Return the heuristic witness as optimal without a MIP solve when the
    /// upper bound already meets lb_better.
    bool skip_when_tight = true;
};

struct ModelRun {
    ModelKind model = ModelKind::FFF;
    SolveStatus status = SolveStatus::Error;
    std::optional<double> objective;
    double best_bound = -kInfinity;
    std::optional<double> lp_bound;
    double wall_time = 0.0;   // backend solve call only
    double build_time = 0.0;  // model construction
    long long var_count = 0;
    long long constraint_count = 0;
    std::optional<double> warm_start_objective;
    std::optional<Schedule> schedule;
    bool mip_skipped = false;
    std::string message;
};

/// Builds the model with T = bounds.ub, solves it and decodes the incumbent.
/// Backend failures are reported in the returned status, not thrown.
ModelRun run_model(const Instance& inst, const BoundReport& bounds, ModelKind model, const RunOptions& options);

struct BenchRecord {
    std::string instance_id;
    int n = 0;
    int m = 0;
    double alpha = 0.0;
    double rho = 0.0;
    int replication = 0;  // 1-based
    ModelKind model = ModelKind::FFF;
    SolveStatus status = SolveStatus::Error;
    std::optional<double> objective;
    double best_bound = -kInfinity;
    std::optional<double> lp_bound;
    double wall_time = 0.0;
    long long var_count = 0;
    long long constraint_count = 0;
    std::int64_t lb_better = 0;
    std::int64_t ub = 0;
    std::optional<double> warm_start_objective;
    bool mip_skipped = false;
};

struct BenchOptions {
    RunOptions run;
    int jobs = 1;  // worker threads, each with its own backend handles
};

/// Generates every instance of `grid` and runs each model on it. Records come
/// back ordered by (grid entry, replication, position in `models`) regardless
/// of the number of workers.
std::vector<BenchRecord> run_bench(const std::vector<GenParams>& grid, const std::vector<ModelKind>& models,
                                   const BenchOptions& options);

BenchRecord make_record(const GenParams& params, int replication, const BoundReport& bounds, const ModelRun& run);

/// 100 * (objective - lp) / lp for an optimal record with an LP bound.
std::optional<double> dev_cr(const BenchRecord& r);
/// 100 * (objective - best bound) / objective for a non-optimal record with an incumbent.
std::optional<double> gap_bb(const BenchRecord& r);

struct ModelIndicators {
    int replications = 0;
    int num_optimal = 0;     // #O
    int num_no_integer = 0;  // #N
    std::optional<double> mean_cpu;     // over optimal solves
    std::optional<double> mean_dev_cr;  // over optimal solves, percent
    std::optional<double> mean_gap_bb;  // over non-optimal solves with an incumbent, percent
};

struct IndicatorRow {
    int n = 0;
    int m = 0;
    double alpha = 0.0;
    double rho = 0.0;
    std::map<ModelKind, ModelIndicators> per_model;
};

/// One row per (n, m, alpha, rho) in order of first appearance.
std::vector<IndicatorRow> indicators(const std::vector<BenchRecord>& records);

enum class ReportFormat { Csv, Markdown };

/// Columns n, m, alpha, rho, then #O, #N, CPU, DEV_CR, GAP_BB per model. CPU
/// is shown as "†" when no solve was optimal; DEV_CR is blank then; GAP_BB is
/// blank when every solve was optimal or had no incumbent.
std::string render_report(const std::vector<IndicatorRow>& rows, ReportFormat format,
                          const std::vector<ModelKind>& models);

std::string records_csv(const std::vector<BenchRecord>& records);
nlohmann::json to_json(const BenchRecord& record);
std::string records_jsonl(const std::vector<BenchRecord>& records);

}  // namespace pms
