#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "Highs.h"
#include "fixtures.hpp"
#include "pms/arcflow.hpp"
#include "pms/milp.hpp"
#include "pms/oracle.hpp"

using namespace pms;

namespace {

struct ParsedCounts {
    HighsInt cols = 0;
    HighsInt rows = 0;
    HighsInt integer_cols = 0;
};

// Reads an exported file back with HiGHS's own LP/MPS reader.
ParsedCounts reparse(const std::string& text, const std::string& extension) {
    const auto path = std::filesystem::temp_directory_path() / ("pms_test_reparse" + extension);
    {
        std::ofstream out(path);
        out << text;
    }
    Highs highs;
    highs.setOptionValue("output_flag", false);
    const HighsStatus status = highs.readModel(path.string());
    std::filesystem::remove(path);
    REQUIRE(status != HighsStatus::kError);
    const HighsLp& lp = highs.getLp();
    ParsedCounts counts{lp.num_col_, lp.num_row_, 0};
    for (HighsVarType t : lp.integrality_)
        if (t == HighsVarType::kInteger) ++counts.integer_cols;
    return counts;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("model container basics") {
    MilpModel m;
    const int x = m.add_variable("x", VarKind::Binary, -5, 7, 1.0);
    const int y = m.add_variable("y", VarKind::Integer, 0, 10);
    CHECK(m.variables()[0].lower == 0.0);
    CHECK(m.variables()[0].upper == 1.0);
    CHECK(m.index_of("y") == y);
    CHECK_FALSE(m.find("z").has_value());
    CHECK_THROWS_AS(m.index_of("z"), ModelError);
    CHECK_THROWS_AS(m.add_variable("x", VarKind::Continuous, 0, 1), ModelError);

    m.add_constraint("c", {{x, 1.0}, {y, 2.0}}, RowSense::LessEqual, 4.0);
    const std::vector<double> ok{1.0, 1.0};
    const std::vector<double> bad{1.0, 2.5};
    CHECK(m.objective_value(ok) == 1.0);
    CHECK(m.max_violation(ok) == 0.0);
    CHECK(m.max_violation(bad) == doctest::Approx(2.0));

    m.hints().fixed_zero.insert(x);
    CHECK(m.effective_upper(x) == 0.0);
    CHECK(m.max_violation(ok) == doctest::Approx(1.0));

    MilpModel broken;
    broken.add_variable("a", VarKind::Continuous, 0, 1);
    broken.add_constraint("r", {{3, 1.0}}, RowSense::Equal, 0.0);
    CHECK_THROWS_AS(broken.validate(), ModelError);

    const MilpModel r = m.relaxed();
    CHECK_FALSE(r.has_integer_variables());
    CHECK(r.effective_upper(x) == 0.0);
}

TEST_CASE("LP export of an empty model") {
    const std::string text = export_lp(MilpModel{});
    const auto lines = lines_of(text);
    CHECK(text.find("Subject To") == std::string::npos);
    CHECK(lines.back() == "End");
    CHECK(text.find("obj:") != std::string::npos);
}

TEST_CASE("LP export of one binary variable") {
    MilpModel m;
    const int x = m.add_variable("x", VarKind::Binary, 0, 1, 1.0);
    m.add_constraint("cap", {{x, 1.0}}, RowSense::LessEqual, 1.0);
    const std::string text = export_lp(m);
    CHECK(text.find(" obj: 1 x") != std::string::npos);
    CHECK(text.find(" cap: 1 x <= 1") != std::string::npos);
    CHECK(text.find("Binaries\n x\n") != std::string::npos);
    const ParsedCounts c = reparse(text, ".lp");
    CHECK(c.cols == 1);
    CHECK(c.rows == 1);
    CHECK(c.integer_cols == 1);
}

TEST_CASE("LP identifiers") {
    CHECK(lp_identifier("x_1_2") == "x_1_2");
    CHECK(lp_identifier("a b") == "a_b");
    CHECK(lp_identifier("1x") == "_1x");
    CHECK(lp_identifier("st") == "_st");

    MilpModel m;
    m.add_variable("a b", VarKind::Continuous, 0, 1);
    m.add_variable("a_b", VarKind::Continuous, 0, 1);
    CHECK_THROWS_AS(export_lp(m), ExportError);
}

TEST_CASE("exported flow model re-parses with the same counts") {
    const FlowModel model = build_fff(testing::five_jobs(), 18, false);
    const ParsedCounts lp = reparse(export_lp(model.milp), ".lp");
    CHECK(lp.cols == model.milp.variable_count());
    CHECK(lp.rows == model.milp.constraint_count());
    CHECK(lp.integer_cols == model.milp.variable_count());

    const ParsedCounts mps = reparse(export_mps(model.milp), ".mps");
    CHECK(mps.cols == model.milp.variable_count());
    CHECK(mps.rows == model.milp.constraint_count());
    CHECK(mps.integer_cols == lp.integer_cols);

    const auto manifest = model.manifest();
    CHECK(manifest["variables"].size() == static_cast<std::size_t>(lp.cols));
}

TEST_CASE("fixed-zero hints reach the exported bounds") {
    const FlowModel model = build_fft(testing::five_jobs(), 18);
    const std::string text = export_lp(model.milp);
    CHECK(text.find("\n z_14 = 0\n") != std::string::npos);
    CHECK(text.find("\n z_15 = 0\n") == std::string::npos);
    CHECK(export_mps(model.milp).find(" FX BND z_14 0") != std::string::npos);
}

TEST_CASE("solve small integer programs on every backend") {
    for (const char* name : {"highs", "highs-lp"}) {
        CAPTURE(name);
        auto backend = make_backend(name);

        MilpModel m;
        const int x = m.add_variable("x", VarKind::Integer, 0, kInfinity, 1.0);
        m.add_constraint("floor", {{x, 1.0}}, RowSense::GreaterEqual, 2.5);
        const SolveOutcome out = backend->solve(m, {});
        CHECK(out.status == SolveStatus::Optimal);
        REQUIRE(out.objective.has_value());
        CHECK(*out.objective == doctest::Approx(3.0));
        CHECK(out.incumbent.at(0) == doctest::Approx(3.0));
        CHECK(backend->solve_relaxation(m) == doctest::Approx(2.5));

        MilpModel inf;
        const int y = inf.add_variable("y", VarKind::Integer, 0, kInfinity, 1.0);
        inf.add_constraint("hi", {{y, 1.0}}, RowSense::LessEqual, 0.0);
        inf.add_constraint("lo", {{y, 1.0}}, RowSense::GreaterEqual, 1.0);
        const SolveOutcome none = backend->solve(inf, {});
        CHECK(none.status == SolveStatus::Infeasible);
        CHECK_FALSE(none.has_incumbent());
        CHECK_THROWS_AS(backend->solve_relaxation(inf), RelaxationError);
    }
}

TEST_CASE("continuous model: relaxation equals solve") {
    MilpModel m;
    const int a = m.add_variable("a", VarKind::Continuous, 0, kInfinity, 2.0);
    const int b = m.add_variable("b", VarKind::Continuous, 0, kInfinity, 3.0);
    m.add_constraint("cover", {{a, 1.0}, {b, 1.0}}, RowSense::GreaterEqual, 4.0);
    m.add_constraint("mix", {{a, 1.0}, {b, -1.0}}, RowSense::LessEqual, 1.0);
    const SolveOutcome out = solve(m);
    REQUIRE(out.objective.has_value());
    CHECK(*out.objective == doctest::Approx(solve_relaxation(m)));
    CHECK(*out.objective == doctest::Approx(2 * 2.5 + 3 * 1.5));
}

TEST_CASE("flow model on the five-job example matches the oracle") {
    const Instance inst = testing::five_jobs();
    const int optimum = brute_force(inst).optimum;
    const FlowModel model = build_fff(inst, 18, false);
    for (const char* name : {"highs", "highs-lp"}) {
        const SolveOutcome out = make_backend(name)->solve(model.milp, {});
        REQUIRE(out.objective.has_value());
        CHECK(*out.objective == doctest::Approx(optimum));
        CHECK(model.milp.max_violation(out.incumbent) < 1e-6);
    }
}

TEST_CASE("warm start is accepted") {
    const Instance inst = testing::five_jobs();
    const FlowModel model = build_fft(inst, 18);
    const std::vector<double> warm = encode_schedule(model, testing::five_jobs_example(), inst);
    CHECK(model.milp.objective_value(warm) == doctest::Approx(17.0));
    CHECK(model.milp.max_violation(warm) < 1e-9);
    const SolveOutcome out = solve(model.milp, {}, warm);
    REQUIRE(out.objective.has_value());
    CHECK(*out.objective == doctest::Approx(15.0));
}

TEST_CASE("solution files") {
    MilpModel m;
    m.add_variable("x_1_0", VarKind::Binary, 0, 1);
    m.add_variable("z_3", VarKind::Binary, 0, 1);
    std::istringstream in("# comment\nx_1_0 1\nz_3 0\n");
    const auto values = parse_solution(in);
    const auto dense = solution_vector(m, values);
    CHECK(dense == std::vector<double>{1.0, 0.0});
    CHECK(render_solution(m, dense) == "x_1_0 1\n");

    std::istringstream unknown("w 1\n");
    CHECK_THROWS_AS(solution_vector(m, parse_solution(unknown)), ModelError);
    std::istringstream missing("x_1_0\n");
    CHECK_THROWS_AS(parse_solution(missing), ModelError);
}

TEST_CASE("status strings round trip") {
    for (SolveStatus s : {SolveStatus::Optimal, SolveStatus::Feasible, SolveStatus::Infeasible,
                          SolveStatus::NoIntegerSolution, SolveStatus::TimeLimitNoSolution, SolveStatus::Error})
        CHECK(parse_solve_status(to_string(s)) == s);
    CHECK_THROWS(parse_solve_status("done"));
    CHECK_THROWS_AS(make_backend("cplex"), BackendError);
}
