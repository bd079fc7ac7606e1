#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pms/bounds.hpp"
#include "pms/tivi.hpp"

using namespace pms;

TEST_CASE("size of the time-indexed model") {
    const Instance inst = testing::five_jobs();
    const TiviModel model = build_tivi(inst, 18);
    CHECK(model.milp.constraint_count() == 5 + 2 * 19 + 5);
    CHECK(model.milp.variable_count() == 5 * 19 + 1);
    CHECK(model.milp.index_of("Cmax") == model.layout.cmax);
    CHECK(model.milp.variables()[static_cast<std::size_t>(model.layout.cmax)].kind == VarKind::Continuous);
}

TEST_CASE("window rows") {
    const TiviModel model = build_tivi(make_instance(2, {{2, 3}}), 6);
    const Constraint& machine3 = model.milp.constraints()[static_cast<std::size_t>(1 + 3)];
    CHECK(machine3.name == "machine_3");
    CHECK(machine3.terms.size() == 4);  // starts 0..3
    const Constraint& server3 = model.milp.constraints()[static_cast<std::size_t>(1 + 7 + 3)];
    CHECK(server3.name == "server_3");
    CHECK(server3.terms.size() == 2);  // starts 2..3
    CHECK(server3.rhs == 1.0);
    CHECK(machine3.rhs == 2.0);
}

TEST_CASE("optimum on the five-job example") {
    const Instance inst = testing::five_jobs();
    const TiviModel model = build_tivi(inst, 18);
    const SolveOutcome out = solve(model.milp);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(*out.objective == doctest::Approx(15.0));
    const Schedule s = decode_tivi(model, out.incumbent, inst);
    CHECK(validate(s, inst).empty());
    CHECK(s.makespan == 15);
}

TEST_CASE("single job") {
    const Instance inst = make_instance(1, {{4, 7}});
    const SolveOutcome out = solve(build_tivi(inst, 11).milp);
    REQUIRE(out.objective.has_value());
    CHECK(*out.objective == doctest::Approx(11.0));
}

TEST_CASE("relaxation report") {
    const Instance inst = testing::five_jobs();
    const RelaxationReport r = tivi_relaxation_report(inst, 18);
    CHECK(std::isfinite(r.vs_trivial));
    CHECK(r.lp <= 15.0 + 1e-6);
    CHECK(r.vs_trivial == doctest::Approx(100.0 * (r.lp - 32.0 / 3.0) / (32.0 / 3.0)));
    CHECK(percent_vs_trivial(inst, 32.0 / 3.0) == doctest::Approx(0.0));
}

TEST_CASE("decode rejects missing starts") {
    const Instance inst = testing::five_jobs();
    const TiviModel model = build_tivi(inst, 18);
    std::vector<double> values(static_cast<std::size_t>(model.milp.variable_count()), 0.0);
    CHECK_THROWS_AS(decode_tivi(model, values, inst), DecodeError);
}
