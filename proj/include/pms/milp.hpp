#pragma once

// Solver-independent MILP container, LP/MPS writers and the backend contract.

#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pms {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { Binary, Integer, Continuous };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInfinity;
    double objective = 0.0;
};

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    RowSense sense = RowSense::Equal;
    double rhs = 0.0;
};

enum class BranchDirection { Up, Down };

/// Search hints. Backends apply what they support; fixed_zero is always
/// enforced (as an upper bound of zero) because it changes the feasible set.
struct HintSet {
    std::map<int, int> branch_priority;  // higher is branched on first
    std::map<int, BranchDirection> branch_direction;
    std::set<int> fixed_zero;
    bool aggressive_incumbent_search = false;

    bool empty() const {
        return branch_priority.empty() && branch_direction.empty() && fixed_zero.empty() &&
               !aggressive_incumbent_search;
    }
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Minimisation model. Variables and constraints keep declaration order.
class MilpModel {
public:
    int add_variable(std::string name, VarKind kind, double lower, double upper, double objective = 0.0);
    int add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    int variable_count() const { return static_cast<int>(variables_.size()); }
    int constraint_count() const { return static_cast<int>(constraints_.size()); }

    HintSet& hints() { return hints_; }
    const HintSet& hints() const { return hints_; }

    std::optional<int> find(std::string_view name) const;
    int index_of(std::string_view name) const;  // throws ModelError
    std::vector<std::string> variable_names() const;

    /// Upper bound after applying fixed_zero.
    double effective_upper(int var) const;
    bool is_integral(int var) const { return variables_[static_cast<std::size_t>(var)].kind != VarKind::Continuous; }
    bool has_integer_variables() const;

    /// Throws ModelError on unknown term references, non-finite data or hints
    /// pointing outside the variable list.
    void validate() const;

    double objective_value(std::span<const double> values) const;

    /// Largest bound, row or integrality violation of a full assignment.
    double max_violation(std::span<const double> values) const;

    /// Copy with every variable continuous (bounds and hints kept).
    MilpModel relaxed() const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::unordered_map<std::string, int> index_;
    HintSet hints_;
};

// ---------------------------------------------------------------------------
// File formats

class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// LP-format identifier for `name`: characters outside the format's allowed
/// set become '_', and a leading digit, '.' or keyword gets a '_' prefix.
std::string lp_identifier(std::string_view name);

/// CPLEX LP format. Throws ExportError if two names collide after sanitising.
std::string export_lp(const MilpModel& model);

/// Free-format MPS.
std::string export_mps(const MilpModel& model);

/// Reads "name value" pairs, one per line; '#' starts a comment line.
std::map<std::string, double> parse_solution(std::istream& in);

/// Dense vector in declaration order; names absent from `values` are zero.
/// Throws ModelError for names the model does not declare.
std::vector<double> solution_vector(const MilpModel& model, const std::map<std::string, double>& values);

/// "name value" lines for the nonzero entries.
std::string render_solution(const MilpModel& model, std::span<const double> values);

// ---------------------------------------------------------------------------
// Solving

enum class SolveStatus { Optimal, Feasible, Infeasible, NoIntegerSolution, TimeLimitNoSolution, Error };

std::string_view to_string(SolveStatus status);
SolveStatus parse_solve_status(std::string_view text);

struct SolveLimits {
    double time_limit = kInfinity;  // seconds
    double gap = 1e-6;              // relative MIP gap
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Error;
    std::optional<double> objective;
    double best_bound = -kInfinity;
    std::vector<double> incumbent;  // declaration order; empty without incumbent
    double wall_time = 0.0;         // seconds spent inside the backend solve call
    std::optional<long long> node_count;
    std::string message;

    bool has_incumbent() const { return objective.has_value(); }
};

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RelaxationError : public std::runtime_error {
public:
    RelaxationError(SolveStatus status, const std::string& what) : std::runtime_error(what), status_(status) {}
    SolveStatus status() const { return status_; }

private:
    SolveStatus status_;
};

/// One backend handle serves one solve at a time; use separate handles for
/// concurrent solves.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;

    /// `warm_start`, when non-empty, is a full assignment offered as the
    /// initial incumbent.
    virtual SolveOutcome solve(const MilpModel& model, const SolveLimits& limits,
                               std::span<const double> warm_start = {}) = 0;

    /// Optimal value with integrality dropped. Throws RelaxationError when the
    /// relaxation is infeasible or unbounded.
    virtual double solve_relaxation(const MilpModel& model) = 0;
};

/// "highs": in-memory HiGHS. "highs-lp": writes the model in LP format and
/// lets HiGHS read the text back, so results go through the exported file.
std::unique_ptr<Backend> make_backend(std::string_view name);

/// Backend named by $PMS_BACKEND, defaulting to "highs".
std::string default_backend_name();

SolveOutcome solve(const MilpModel& model, const SolveLimits& limits = {}, std::span<const double> warm_start = {});
double solve_relaxation(const MilpModel& model);

}  // namespace pms
