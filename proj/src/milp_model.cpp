#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "pms/milp.hpp"

namespace pms {

int MilpModel::add_variable(std::string name, VarKind kind, double lower, double upper, double objective) {
    if (index_.count(name) != 0) throw ModelError("duplicate variable name " + name);
    if (kind == VarKind::Binary) {
        lower = std::max(lower, 0.0);
        upper = std::min(upper, 1.0);
    }
    const int id = static_cast<int>(variables_.size());
    index_.emplace(name, id);
    variables_.push_back(Variable{std::move(name), kind, lower, upper, objective});
    return id;
}

int MilpModel::add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs) {
    const int id = static_cast<int>(constraints_.size());
    constraints_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
    return id;
}

std::optional<int> MilpModel::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int MilpModel::index_of(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw ModelError(fmt::format("unknown variable {}", name));
}

std::vector<std::string> MilpModel::variable_names() const {
    std::vector<std::string> names;
    names.reserve(variables_.size());
    for (const Variable& v : variables_) names.push_back(v.name);
    return names;
}

double MilpModel::effective_upper(int var) const {
    const Variable& v = variables_[static_cast<std::size_t>(var)];
    return hints_.fixed_zero.count(var) != 0 ? std::min(v.upper, 0.0) : v.upper;
}

bool MilpModel::has_integer_variables() const {
    return std::any_of(variables_.begin(), variables_.end(),
                       [](const Variable& v) { return v.kind != VarKind::Continuous; });
}

void MilpModel::validate() const {
    const int n = variable_count();
    std::set<std::string> row_names;
    for (const Variable& v : variables_) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.objective))
            throw ModelError("non-finite data on variable " + v.name);
        if (v.lower > v.upper) throw ModelError("empty domain on variable " + v.name);
    }
    for (const Constraint& c : constraints_) {
        if (!row_names.insert(c.name).second) throw ModelError("duplicate constraint name " + c.name);
        if (!std::isfinite(c.rhs)) throw ModelError("non-finite right-hand side in " + c.name);
        for (const Term& t : c.terms) {
            if (t.var < 0 || t.var >= n) throw ModelError(fmt::format("constraint {} references variable {}", c.name, t.var));
            if (!std::isfinite(t.coef)) throw ModelError("non-finite coefficient in " + c.name);
        }
    }
    auto check = [n](int var, const char* what) {
        if (var < 0 || var >= n) throw ModelError(fmt::format("{} hint on undeclared variable {}", what, var));
    };
    for (auto [var, prio] : hints_.branch_priority) check(var, "priority");
    for (auto [var, dir] : hints_.branch_direction) check(var, "direction");
    for (int var : hints_.fixed_zero) check(var, "fixed-zero");
}

double MilpModel::objective_value(std::span<const double> values) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < variables_.size(); ++i) sum += variables_[i].objective * values[i];
    return sum;
}

double MilpModel::max_violation(std::span<const double> values) const {
    if (values.size() != variables_.size()) return kInfinity;
    double worst = 0.0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const double v = values[i];
        worst = std::max({worst, variables_[i].lower - v, v - effective_upper(static_cast<int>(i))});
        if (variables_[i].kind != VarKind::Continuous) worst = std::max(worst, std::abs(v - std::round(v)));
    }
    for (const Constraint& c : constraints_) {
        double lhs = 0.0;
        for (const Term& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
        switch (c.sense) {
            case RowSense::LessEqual: worst = std::max(worst, lhs - c.rhs); break;
            case RowSense::GreaterEqual: worst = std::max(worst, c.rhs - lhs); break;
            case RowSense::Equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
        }
    }
    return worst;
}

MilpModel MilpModel::relaxed() const {
    MilpModel copy = *this;
    for (Variable& v : copy.variables_) v.kind = VarKind::Continuous;
    return copy;
}

// ---------------------------------------------------------------------------

namespace {

bool lp_char_allowed(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    static constexpr std::string_view kExtra = "!\"#$%&()/,.;?@_`'{}|~";
    return kExtra.find(c) != std::string_view::npos;
}

bool is_lp_keyword(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    static const std::set<std::string> kKeywords = {
        "minimize", "minimise", "minimum", "min", "maximize", "maximise", "maximum", "max",
        "subject", "such", "st", "s.t.", "st.", "bounds", "bound", "general", "generals", "gen",
        "integer", "integers", "binary", "binaries", "bin", "semi-continuous", "semis", "semi",
        "sos", "end", "free", "inf", "infinity"};
    return kKeywords.count(lower) != 0;
}

std::string number(double v) {
    if (v == kInfinity) return "inf";
    if (v == -kInfinity) return "-inf";
    return fmt::format("{}", v);
}

const char* sense_token(RowSense s) {
    switch (s) {
        case RowSense::LessEqual: return "<=";
        case RowSense::GreaterEqual: return ">=";
        case RowSense::Equal: return "=";
    }
    return "=";
}

std::vector<std::string> sanitized_names(const MilpModel& model) {
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const Variable& v : model.variables()) {
        std::string id = lp_identifier(v.name);
        if (!seen.insert(id).second)
            throw ExportError(fmt::format("variable name {} collides after sanitising as {}", v.name, id));
        names.push_back(std::move(id));
    }
    return names;
}

// Appends " + c name" terms, wrapping long rows onto continuation lines.
void write_terms(std::string& out, const std::vector<Term>& terms, const std::vector<std::string>& names) {
    int on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Term& t = terms[i];
        if (on_line == 8) {
            out += "\n   ";
            on_line = 0;
        }
        const double mag = std::abs(t.coef);
        if (i == 0 && t.coef >= 0)
            out += fmt::format(" {} {}", number(mag), names[static_cast<std::size_t>(t.var)]);
        else
            out += fmt::format(" {} {} {}", t.coef < 0 ? '-' : '+', number(mag), names[static_cast<std::size_t>(t.var)]);
        ++on_line;
    }
}

}  // namespace

std::string lp_identifier(std::string_view name) {
    std::string id;
    id.reserve(name.size() + 1);
    for (char c : name) id += lp_char_allowed(c) ? c : '_';
    if (id.empty() || std::isdigit(static_cast<unsigned char>(id.front())) || id.front() == '.' || is_lp_keyword(id))
        id.insert(id.begin(), '_');
    return id;
}

std::string export_lp(const MilpModel& model) {
    model.validate();
    const auto names = sanitized_names(model);
    {
        std::set<std::string> rows;
        for (const Constraint& c : model.constraints())
            if (!rows.insert(lp_identifier(c.name)).second)
                throw ExportError("constraint name " + c.name + " collides after sanitising");
    }

    std::string out = "\\ Problem written by pms\nMinimize\n obj:";
    std::vector<Term> objective;
    for (int i = 0; i < model.variable_count(); ++i) {
        const double c = model.variables()[static_cast<std::size_t>(i)].objective;
        if (c != 0.0) objective.push_back({i, c});
    }
    write_terms(out, objective, names);
    out += "\n";
    if (model.constraint_count() == 0 && model.variable_count() == 0) return out + "End\n";

    out += "Subject To\n";
    for (const Constraint& c : model.constraints()) {
        out += fmt::format(" {}:", lp_identifier(c.name));
        if (c.terms.empty())
            write_terms(out, {Term{0, 0.0}}, names);
        else
            write_terms(out, c.terms, names);
        out += fmt::format(" {} {}\n", sense_token(c.sense), number(c.rhs));
    }

    std::string bounds, generals, binaries;
    for (int i = 0; i < model.variable_count(); ++i) {
        const Variable& v = model.variables()[static_cast<std::size_t>(i)];
        const std::string& id = names[static_cast<std::size_t>(i)];
        const double lo = v.lower;
        const double hi = model.effective_upper(i);
        if (v.kind == VarKind::Binary && lo == 0.0 && hi == 1.0) {
            binaries += " " + id + "\n";
            continue;
        }
        if (v.kind != VarKind::Continuous) generals += " " + id + "\n";
        if (lo == hi)
            bounds += fmt::format(" {} = {}\n", id, number(lo));
        else if (lo == -kInfinity && hi == kInfinity)
            bounds += fmt::format(" {} free\n", id);
        else if (lo != 0.0 || hi != kInfinity)
            bounds += fmt::format(" {} <= {} <= {}\n", number(lo), id, number(hi));
    }
    if (!bounds.empty()) out += "Bounds\n" + bounds;
    if (!generals.empty()) out += "Generals\n" + generals;
    if (!binaries.empty()) out += "Binaries\n" + binaries;
    out += "End\n";
    return out;
}

std::string export_mps(const MilpModel& model) {
    model.validate();
    const auto names = sanitized_names(model);
    std::vector<std::string> rows;
    for (const Constraint& c : model.constraints()) rows.push_back(lp_identifier(c.name));

    // Column-major view of the matrix.
    std::vector<std::vector<std::pair<std::size_t, double>>> columns(model.variables().size());
    for (std::size_t r = 0; r < model.constraints().size(); ++r)
        for (const Term& t : model.constraints()[r].terms)
            columns[static_cast<std::size_t>(t.var)].emplace_back(r, t.coef);

    std::string out = "NAME pms\nROWS\n N obj\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const char* kind = model.constraints()[r].sense == RowSense::LessEqual      ? "L"
                           : model.constraints()[r].sense == RowSense::GreaterEqual ? "G"
                                                                                     : "E";
        out += fmt::format(" {} {}\n", kind, rows[r]);
    }
    out += "COLUMNS\n";
    bool in_int = false;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        const Variable& v = model.variables()[i];
        const bool integral = v.kind != VarKind::Continuous;
        if (integral != in_int) {
            out += integral ? " MARKER 'MARKER' 'INTORG'\n" : " MARKER 'MARKER' 'INTEND'\n";
            in_int = integral;
        }
        if (v.objective != 0.0) out += fmt::format(" {} obj {}\n", names[i], number(v.objective));
        for (auto [r, coef] : columns[i]) out += fmt::format(" {} {} {}\n", names[i], rows[r], number(coef));
        if (v.objective == 0.0 && columns[i].empty()) out += fmt::format(" {} obj 0\n", names[i]);
    }
    if (in_int) out += " MARKER 'MARKER' 'INTEND'\n";
    out += "RHS\n";
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (model.constraints()[r].rhs != 0.0) out += fmt::format(" RHS {} {}\n", rows[r], number(model.constraints()[r].rhs));
    out += "BOUNDS\n";
    for (int i = 0; i < model.variable_count(); ++i) {
        const Variable& v = model.variables()[static_cast<std::size_t>(i)];
        const std::string& id = names[static_cast<std::size_t>(i)];
        const double lo = v.lower;
        const double hi = model.effective_upper(i);
        if (lo == hi) {
            out += fmt::format(" FX BND {} {}\n", id, number(lo));
            continue;
        }
        if (lo == -kInfinity && hi == kInfinity) {
            out += fmt::format(" FR BND {}\n", id);
            continue;
        }
        if (lo == -kInfinity)
            out += fmt::format(" MI BND {}\n", id);
        else if (lo != 0.0 || v.kind != VarKind::Continuous)
            out += fmt::format(" LO BND {} {}\n", id, number(lo));
        if (hi != kInfinity)
            out += fmt::format(" UP BND {} {}\n", id, number(hi));
        else if (v.kind != VarKind::Continuous)
            out += fmt::format(" PL BND {}\n", id);
    }
    out += "ENDATA\n";
    return out;
}

std::map<std::string, double> parse_solution(std::istream& in) {
    std::map<std::string, double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(line);
        std::string name;
        if (!(fields >> name) || name.front() == '#') continue;
        double value = 0.0;
        if (!(fields >> value)) throw ModelError(fmt::format("solution line {}: missing value for {}", lineno, name));
        values[name] = value;
    }
    return values;
}

std::vector<double> solution_vector(const MilpModel& model, const std::map<std::string, double>& values) {
    std::vector<double> dense(model.variables().size(), 0.0);
    for (const auto& [name, value] : values) dense[static_cast<std::size_t>(model.index_of(name))] = value;
    return dense;
}

std::string render_solution(const MilpModel& model, std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < model.variables().size() && i < values.size(); ++i)
        if (values[i] != 0.0) out += fmt::format("{} {}\n", model.variables()[i].name, number(values[i]));
    return out;
}

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::NoIntegerSolution: return "no_integer_solution";
        case SolveStatus::TimeLimitNoSolution: return "time_limit_no_solution";
        case SolveStatus::Error: return "error";
    }
    return "error";
}

SolveStatus parse_solve_status(std::string_view text) {
    for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::Feasible, SolveStatus::Infeasible,
                          SolveStatus::NoIntegerSolution, SolveStatus::TimeLimitNoSolution, SolveStatus::Error})
        if (to_string(s) == text) return s;
    throw std::invalid_argument(fmt::format("unknown solve status '{}'", text));
}

}  // namespace pms
