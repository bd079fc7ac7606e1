#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "fixtures.hpp"
#include "pms/schedule.hpp"

using namespace pms;

namespace {

int count_of(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.rule == rule; });
}

}  // namespace

TEST_CASE("the C = 17 example is feasible") {
    const Schedule s = testing::five_jobs_example();
    CHECK(s.makespan == 17);
    CHECK(validate(s, testing::five_jobs()).empty());
    CHECK(s.assignments.front().job == 1);
    CHECK(s.assignments.front().setup_start == 0);
    CHECK(s.assignments.front().completion() == 5);
}

TEST_CASE("server overlap") {
    const Instance inst = make_instance(2, {{2, 1}, {2, 1}});
    const auto v = validate(make_schedule(2, {{1, 1, 0, 2, 1}, {2, 2, 1, 2, 1}}), inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "server");
    CHECK(v[0].from == 1);
    CHECK(v[0].to == 2);
    CHECK(v[0].jobs == std::vector<int>{1, 2});
}

TEST_CASE("machine overlap") {
    const Instance inst = make_instance(3, {{2, 3}, {2, 3}});
    const auto v = validate(make_schedule(3, {{1, 1, 0, 2, 3}, {2, 1, 3, 2, 3}}), inst);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "machine");
    CHECK(v[0].from == 3);
    CHECK(v[0].to == 5);
}

TEST_CASE("other violations") {
    const Instance inst = make_instance(2, {{1, 1}, {1, 1}});
    CHECK(has_rule(validate(make_schedule(2, {{1, 1, 0, 1, 1}}), inst), "coverage"));
    CHECK(has_rule(validate(make_schedule(2, {{1, 1, 0, 1, 1}, {2, 3, 1, 1, 1}}), inst), "machine-range"));
    CHECK(has_rule(validate(make_schedule(2, {{1, 1, 0, 1, 1}, {2, 2, 1, 1, 2}}), inst), "lengths"));
    CHECK(has_rule(validate(make_schedule(2, {{1, 1, -1, 1, 1}, {2, 2, 1, 1, 1}}), inst), "start"));
    Schedule wrong = make_schedule(2, {{1, 1, 0, 1, 1}, {2, 2, 1, 1, 1}});
    CHECK(validate(wrong, inst).empty());
    wrong.makespan = 5;
    CHECK(has_rule(validate(wrong, inst), "makespan"));
}

TEST_CASE("schedule from start times") {
    const Instance inst = testing::five_jobs();
    const Schedule s = schedule_from_starts(inst, {{1, 0}, {2, 2}, {3, 5}, {5, 8}, {4, 10}});
    CHECK(validate(s, inst).empty());
    CHECK(s.makespan == 17);
    CHECK_THROWS_AS(schedule_from_starts(make_instance(1, {{1, 5}, {1, 5}}), {{1, 0}, {2, 1}}),
                    std::invalid_argument);
}

TEST_CASE("json round trip") {
    const Instance inst = testing::five_jobs();
    const Schedule s = testing::five_jobs_example();
    CHECK(schedule_from_json(to_json(s), inst) == s);
    CHECK(to_json(s)["makespan"] == 17);
}

TEST_CASE("gantt rows and bars") {
    const Schedule one = make_schedule(1, {{1, 1, 0, 4, 7}});
    const std::string svg = gantt_svg(one);
    CHECK(count_of(svg, ">M1<") == 1);
    CHECK(count_of(svg, ">Server<") == 1);
    CHECK(count_of(svg, "<rect class=") == 2);

    const std::string fig = gantt_svg(testing::five_jobs_example());
    CHECK(count_of(fig, ">M3<") == 1);
    CHECK(count_of(fig, ">Server<") == 1);
    CHECK(count_of(fig, "<rect class=\"setup\"") == 5);
    CHECK(count_of(fig, "<rect class=\"job\"") == 5);
    CHECK(fig.find("Cmax = 17") != std::string::npos);
}

TEST_CASE("gantt golden") {
    const std::string svg = gantt_svg(testing::five_jobs_example());
    const std::filesystem::path golden = std::filesystem::path(PMS_TEST_DATA) / "five_jobs_example.svg";
    std::ifstream in(golden);
    REQUIRE_MESSAGE(in.good(), "missing golden file " << golden.string());
    const std::string expected{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    CHECK(svg == expected);
}
