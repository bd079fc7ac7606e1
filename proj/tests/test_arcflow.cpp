#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pms/arcflow.hpp"
#include "pms/bounds.hpp"
#include "pms/oracle.hpp"

using namespace pms;

TEST_CASE("variable and constraint counts on the five-job example") {
    const Instance inst = testing::five_jobs();
    const FlowModel plain = build_fff(inst, 18, false);
    CHECK(plain.milp.variable_count() == 117);
    CHECK(plain.layout.variable_count() == 117);
    CHECK(count_variables(inst, 18, false) == 117);
    CHECK(plain.milp.constraint_count() == 43);
    CHECK(count_constraints(inst, 18, false) == 43);

    const FlowModel grouped = build_fff(inst, 18, true);
    CHECK(grouped.milp.variable_count() == 103);
    CHECK(count_variables(inst, 18, true) == 103);
    CHECK(grouped.milp.constraint_count() == 4 + 38);
    int assignment_rows = 0;
    for (const Constraint& c : grouped.milp.constraints())
        if (c.name.rfind("assign_", 0) == 0) ++assignment_rows;
    CHECK(assignment_rows == 4);
    CHECK(grouped.milp.constraints()[0].rhs == 2.0);
}

TEST_CASE("variable naming and domains") {
    const FlowModel model = build_fff(testing::five_jobs(), 18, false);
    const MilpModel& m = model.milp;
    CHECK(m.find("x_1_0").has_value());
    CHECK(m.find("x_1_13").has_value());
    CHECK_FALSE(m.find("x_1_14").has_value());
    CHECK(m.variables()[static_cast<std::size_t>(m.index_of("yM_0"))].upper == 3.0);
    CHECK(m.variables()[static_cast<std::size_t>(m.index_of("yM_0"))].kind == VarKind::Integer);
    CHECK(m.variables()[static_cast<std::size_t>(m.index_of("yS_17"))].kind == VarKind::Binary);
    CHECK_FALSE(m.find("yS_18").has_value());
    CHECK(m.variables()[static_cast<std::size_t>(m.index_of("z_18"))].objective == 18.0);
    CHECK_FALSE(m.find("z_0").has_value());
}

TEST_CASE("single job") {
    const Instance inst = make_instance(1, {{4, 7}});
    const FlowModel model = build_fff(inst, 11, false);
    CHECK(model.milp.variable_count() == 1 + 3 * 11);
    const SolveOutcome out = solve(model.milp);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(*out.objective == doctest::Approx(11.0));
    CHECK(out.incumbent[static_cast<std::size_t>(model.milp.index_of("x_1_0"))] == doctest::Approx(1.0));
    CHECK(out.incumbent[static_cast<std::size_t>(model.milp.index_of("z_11"))] == doctest::Approx(1.0));
    const Schedule s = decode_flow(model.layout, out.incumbent, inst);
    CHECK(s.makespan == 11);
    CHECK(s.assignments.size() == 1);
}

TEST_CASE("short horizon is rejected") {
    CHECK_THROWS_AS(build_fff(testing::five_jobs(), 7, false), HorizonError);
    CHECK_NOTHROW(build_fff(testing::five_jobs(), 8, false));
}

TEST_CASE("tuned model hints") {
    const FlowModel model = build_fft(testing::five_jobs(), 18);
    const HintSet& h = model.milp.hints();
    CHECK(h.fixed_zero.size() == 14);
    for (int t = 1; t <= 14; ++t) CHECK(h.fixed_zero.count(model.layout.sink[static_cast<std::size_t>(t)]) == 1);
    CHECK(h.fixed_zero.count(model.layout.sink[15]) == 0);
    CHECK(h.aggressive_incumbent_search);
    const int x0 = model.milp.index_of("x_1_0");
    const int x5 = model.milp.index_of("x_1_5");
    CHECK(h.branch_priority.at(x0) == 19);
    CHECK(h.branch_priority.at(x5) == 14);
    CHECK(h.branch_direction.at(x0) == BranchDirection::Up);
    CHECK(h.branch_priority.size() == static_cast<std::size_t>(count_variables(testing::five_jobs(), 18, true) - 54));
}

TEST_CASE("solving the five-job example") {
    const Instance inst = testing::five_jobs();
    for (const FlowModel& model : {build_fff(inst, 18, false), build_fff(inst, 18, true), build_fft(inst, 18)}) {
        const SolveOutcome out = solve(model.milp);
        REQUIRE(out.status == SolveStatus::Optimal);
        CHECK(*out.objective == doctest::Approx(15.0));
        const Schedule s = decode_flow(model.layout, out.incumbent, inst);
        CHECK(validate(s, inst).empty());
        CHECK(s.makespan == 15);
    }
}

TEST_CASE("lb_better equal to the horizon fixes every z but the last") {
    // Two jobs (1, 10) on two machines: lb_better = 12 = ub.
    const Instance inst = make_instance(2, {{1, 10}, {1, 10}});
    REQUIRE(lb_better(inst) == 12);
    const FlowModel model = build_fft(inst, 12);
    CHECK(model.milp.hints().fixed_zero.size() == 11);
    const SolveOutcome out = solve(model.milp);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(*out.objective == doctest::Approx(12.0));
}

TEST_CASE("encode and decode round trip") {
    const Instance inst = testing::five_jobs();
    const Schedule example = testing::five_jobs_example();
    for (bool grouped : {false, true}) {
        const FlowModel model = build_fff(inst, 18, grouped);
        const std::vector<double> values = encode_schedule(model, example, inst);
        CHECK(audit_flow(model.layout, values).empty());
        CHECK(model.milp.max_violation(values) < 1e-9);
        CHECK(model.milp.objective_value(values) == doctest::Approx(17.0));
        const Schedule back = decode_flow(model.layout, values, inst);
        CHECK(validate(back, inst).empty());
        CHECK(back.makespan == 17);
        for (const Assignment& a : back.assignments) {
            const Job& j = inst.job(a.job);
            CHECK(a.setup == j.setup);
            CHECK(a.processing == j.processing);
        }
    }
    const FlowModel tight = build_fff(inst, 16, true);
    CHECK_THROWS_AS(encode_schedule(tight, example, inst), std::invalid_argument);
}

TEST_CASE("decode rejects broken flows") {
    const Instance inst = testing::five_jobs();
    const FlowModel model = build_fff(inst, 18, true);
    std::vector<double> values = encode_schedule(model, testing::five_jobs_example(), inst);
    values[static_cast<std::size_t>(model.milp.index_of("yM_3"))] += 1.0;
    CHECK_FALSE(audit_flow(model.layout, values).empty());
    CHECK_THROWS_AS(decode_flow(model.layout, values, inst), DecodeError);
    values[static_cast<std::size_t>(model.milp.index_of("yM_3"))] -= 0.5;
    CHECK_THROWS_AS(decode_flow(model.layout, values, inst), DecodeError);
}

TEST_CASE("grouped and ungrouped agree on random instances with duplicates") {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 15; ++trial) {
        std::uniform_int_distribution<int> n_dist(2, 6), m_dist(2, 3), v_dist(1, 4);
        std::vector<std::pair<int, int>> jobs;
        const int n = n_dist(gen);
        for (int j = 0; j < n; ++j) jobs.emplace_back(v_dist(gen), v_dist(gen));
        const Instance inst = make_instance(m_dist(gen), jobs);
        const int T = static_cast<int>(horizon_ub(inst).ub);
        const SolveOutcome a = solve(build_fff(inst, T, false).milp);
        const FlowModel grouped = build_fff(inst, T, true);
        const SolveOutcome b = solve(grouped.milp);
        REQUIRE(a.objective.has_value());
        REQUIRE(b.objective.has_value());
        CHECK(*a.objective == doctest::Approx(*b.objective));
        CHECK(*b.objective == doctest::Approx(brute_force(inst).optimum));
        const Schedule s = decode_flow(grouped.layout, b.incumbent, inst);
        CHECK(validate(s, inst).empty());
        CHECK(s.makespan == static_cast<int>(std::lround(*b.objective)));
    }
}
