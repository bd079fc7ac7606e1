// HiGHS-backed implementation of the Backend contract.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include <unistd.h>

#include <fmt/format.h>

#include "Highs.h"
#include "pms/milp.hpp"

namespace pms {

namespace {

HighsLp to_highs(const MilpModel& model, bool keep_integrality) {
    HighsLp lp;
    lp.num_col_ = model.variable_count();
    lp.num_row_ = model.constraint_count();
    lp.sense_ = ObjSense::kMinimize;
    bool any_integer = false;
    for (int i = 0; i < model.variable_count(); ++i) {
        const Variable& v = model.variables()[static_cast<std::size_t>(i)];
        lp.col_cost_.push_back(v.objective);
        lp.col_lower_.push_back(v.lower == -kInfinity ? -kHighsInf : v.lower);
        const double hi = model.effective_upper(i);
        lp.col_upper_.push_back(hi == kInfinity ? kHighsInf : hi);
        lp.col_names_.push_back(v.name);
        const bool integral = keep_integrality && v.kind != VarKind::Continuous;
        any_integer = any_integer || integral;
        lp.integrality_.push_back(integral ? HighsVarType::kInteger : HighsVarType::kContinuous);
    }
    if (!any_integer) lp.integrality_.clear();

    std::vector<std::vector<std::pair<HighsInt, double>>> columns(static_cast<std::size_t>(lp.num_col_));
    HighsInt row = 0;
    for (const Constraint& c : model.constraints()) {
        for (const Term& t : c.terms) columns[static_cast<std::size_t>(t.var)].emplace_back(row, t.coef);
        lp.row_lower_.push_back(c.sense == RowSense::LessEqual ? -kHighsInf : c.rhs);
        lp.row_upper_.push_back(c.sense == RowSense::GreaterEqual ? kHighsInf : c.rhs);
        lp.row_names_.push_back(c.name);
        ++row;
    }
    lp.a_matrix_.format_ = MatrixFormat::kColwise;
    lp.a_matrix_.num_col_ = lp.num_col_;
    lp.a_matrix_.num_row_ = lp.num_row_;
    lp.a_matrix_.start_.assign(1, 0);
    for (const auto& entries : columns) {
        for (const auto& [r, coef] : entries) {
            lp.a_matrix_.index_.push_back(r);
            lp.a_matrix_.value_.push_back(coef);
        }
        lp.a_matrix_.start_.push_back(static_cast<HighsInt>(lp.a_matrix_.index_.size()));
    }
    return lp;
}

void warn_unsupported_hints_once(const HintSet& hints) {
    static std::once_flag once;
    if (hints.branch_priority.empty() && hints.branch_direction.empty()) return;
    std::call_once(once, [] {
        std::cerr << "pms: the HiGHS backend has no branching priorities or directions; those hints are ignored\n";
    });
}

void configure(Highs& highs, const HintSet& hints, const SolveLimits& limits) {
    highs.setOptionValue("output_flag", false);
    highs.setOptionValue("random_seed", 0);
    if (limits.time_limit != kInfinity) highs.setOptionValue("time_limit", std::max(limits.time_limit, 0.0));
    highs.setOptionValue("mip_rel_gap", limits.gap);
    if (hints.aggressive_incumbent_search) {
        // Closest HiGHS counterparts of an incumbent-focused configuration.
        highs.setOptionValue("mip_heuristic_effort", 0.3);
        highs.setOptionValue("mip_heuristic_run_rins", true);
        highs.setOptionValue("mip_heuristic_run_rens", true);
    }
    warn_unsupported_hints_once(hints);
}

SolveStatus classify(HighsModelStatus status, bool has_incumbent) {
    switch (status) {
        case HighsModelStatus::kOptimal:
        case HighsModelStatus::kModelEmpty:
            return SolveStatus::Optimal;
        case HighsModelStatus::kInfeasible:
            return SolveStatus::Infeasible;
        case HighsModelStatus::kTimeLimit:
            return has_incumbent ? SolveStatus::Feasible : SolveStatus::TimeLimitNoSolution;
        case HighsModelStatus::kIterationLimit:
        case HighsModelStatus::kSolutionLimit:
        case HighsModelStatus::kInterrupt:
        case HighsModelStatus::kObjectiveBound:
        case HighsModelStatus::kObjectiveTarget:
        case HighsModelStatus::kMemoryLimit:
        case HighsModelStatus::kUnknown:
            return has_incumbent ? SolveStatus::Feasible : SolveStatus::NoIntegerSolution;
        default:
            return SolveStatus::Error;
    }
}

// Runs a loaded Highs object and packages the outcome. `column_of[i]` maps
// model variable i to the solver column (identity for in-memory models).
SolveOutcome run_and_collect(Highs& highs, const MilpModel& model, const std::vector<int>& column_of) {
    SolveOutcome out;
    const auto start = std::chrono::steady_clock::now();
    const HighsStatus run_status = highs.run();
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (run_status == HighsStatus::kError) {
        out.status = SolveStatus::Error;
        out.message = highs.modelStatusToString(highs.getModelStatus());
        return out;
    }
    const HighsInfo& info = highs.getInfo();
    const HighsModelStatus status = highs.getModelStatus();
    const bool mip = model.has_integer_variables();
    const bool has_incumbent = info.primal_solution_status == kSolutionStatusFeasible;
    out.status = classify(status, has_incumbent);
    out.message = highs.modelStatusToString(status);
    if (has_incumbent) {
        out.objective = info.objective_function_value;
        const auto& values = highs.getSolution().col_value;
        out.incumbent.resize(column_of.size());
        for (std::size_t i = 0; i < column_of.size(); ++i)
            out.incumbent[i] = values[static_cast<std::size_t>(column_of[i])];
    }
    if (mip) {
        out.best_bound = info.mip_dual_bound;
        out.node_count = info.mip_node_count;
    } else if (out.status == SolveStatus::Optimal) {
        out.best_bound = info.objective_function_value;
    }
    if (status == HighsModelStatus::kModelEmpty) {
        out.objective = 0.0;
        out.best_bound = 0.0;
    }
    return out;
}

void offer_warm_start(Highs& highs, std::span<const double> warm_start, const std::vector<int>& column_of,
                      HighsInt num_col) {
    if (warm_start.empty()) return;
    HighsSolution start;
    start.col_value.assign(static_cast<std::size_t>(num_col), 0.0);
    for (std::size_t i = 0; i < column_of.size() && i < warm_start.size(); ++i)
        start.col_value[static_cast<std::size_t>(column_of[i])] = warm_start[i];
    start.value_valid = true;
    highs.setSolution(start);
}

std::vector<int> identity(int n) {
    std::vector<int> ids(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
    return ids;
}

class HighsBackend : public Backend {
public:
    std::string name() const override { return "highs"; }

    SolveOutcome solve(const MilpModel& model, const SolveLimits& limits,
                       std::span<const double> warm_start) override {
        model.validate();
        Highs highs;
        configure(highs, model.hints(), limits);
        if (highs.passModel(to_highs(model, true)) == HighsStatus::kError)
            throw BackendError("HiGHS rejected the model");
        const auto columns = identity(model.variable_count());
        offer_warm_start(highs, warm_start, columns, model.variable_count());
        return run_and_collect(highs, model, columns);
    }

    double solve_relaxation(const MilpModel& model) override {
        model.validate();
        Highs highs;
        configure(highs, HintSet{}, SolveLimits{});
        if (highs.passModel(to_highs(model, false)) == HighsStatus::kError)
            throw BackendError("HiGHS rejected the model");
        return relaxation_value(highs);
    }

    static double relaxation_value(Highs& highs) {
        highs.setOptionValue("solver", "ipm");
        highs.setOptionValue("primal_feasibility_tolerance", 1e-9);
        highs.setOptionValue("dual_feasibility_tolerance", 1e-9);
        highs.run();
        const HighsModelStatus status = highs.getModelStatus();
        if (status == HighsModelStatus::kOptimal) return highs.getInfo().objective_function_value;
        if (status == HighsModelStatus::kModelEmpty) return 0.0;
        if (status == HighsModelStatus::kInfeasible)
            throw RelaxationError(SolveStatus::Infeasible, "relaxation is infeasible");
        throw RelaxationError(SolveStatus::Error, "relaxation not solved: " + highs.modelStatusToString(status));
    }
};

// Sends the model through its LP-format text. Column order in the reloaded
// model follows first appearance in the file, so results are mapped back by
// name.
class LpFileBackend : public Backend {
public:
    std::string name() const override { return "highs-lp"; }

    SolveOutcome solve(const MilpModel& model, const SolveLimits& limits,
                       std::span<const double> warm_start) override {
        Highs highs;
        configure(highs, model.hints(), limits);
        const auto columns = load(highs, model, export_lp(model));
        offer_warm_start(highs, warm_start, columns, highs.getNumCol());
        return run_and_collect(highs, model, columns);
    }

    double solve_relaxation(const MilpModel& model) override {
        Highs highs;
        configure(highs, HintSet{}, SolveLimits{});
        load(highs, model, export_lp(model.relaxed()));
        return HighsBackend::relaxation_value(highs);
    }

private:
    static std::vector<int> load(Highs& highs, const MilpModel& model, const std::string& text) {
        static std::atomic<int> counter{0};
        const auto path = std::filesystem::temp_directory_path() /
                          fmt::format("pms_{}_{}.lp", static_cast<long>(::getpid()), counter++);
        {
            std::ofstream f(path);
            f << text;
        }
        const HighsStatus status = highs.readModel(path.string());
        std::filesystem::remove(path);
        if (status == HighsStatus::kError) throw BackendError("HiGHS could not read the exported LP file");

        const HighsLp& lp = highs.getLp();
        std::unordered_map<std::string, int> by_name;
        for (std::size_t c = 0; c < lp.col_names_.size(); ++c) by_name.emplace(lp.col_names_[c], static_cast<int>(c));
        std::vector<int> columns;
        for (const Variable& v : model.variables()) {
            auto it = by_name.find(lp_identifier(v.name));
            if (it == by_name.end())
                throw BackendError("variable " + v.name + " is missing from the reloaded LP file");
            columns.push_back(it->second);
        }
        return columns;
    }
};

}  // namespace

std::unique_ptr<Backend> make_backend(std::string_view name) {
    if (name == "highs") return std::make_unique<HighsBackend>();
    if (name == "highs-lp") return std::make_unique<LpFileBackend>();
    throw BackendError(fmt::format("unknown backend '{}' (expected highs or highs-lp)", name));
}

std::string default_backend_name() {
    const char* env = std::getenv("PMS_BACKEND");
    return env != nullptr && *env != '\0' ? std::string(env) : std::string("highs");
}

SolveOutcome solve(const MilpModel& model, const SolveLimits& limits, std::span<const double> warm_start) {
    return make_backend(default_backend_name())->solve(model, limits, warm_start);
}

double solve_relaxation(const MilpModel& model) { return make_backend(default_backend_name())->solve_relaxation(model); }

}  // namespace pms
