#include <doctest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "pms/instance.hpp"
#include "pms/rng.hpp"

using namespace pms;

TEST_CASE("parse the five-job example") {
    const Instance inst = parse_instance("5 3\n2 3\n3 5\n3 4\n2 5\n2 3");
    CHECK(inst == testing::five_jobs());
    CHECK(inst.size() == 5);
    CHECK(inst.machines == 3);
    CHECK(inst.total_setup() == 12);
    CHECK(inst.total_work() == 32);
    CHECK(inst.max_span() == 8);
}

TEST_CASE("parse minimal instance") {
    const Instance inst = parse_instance("1 1\n4 7");
    REQUIRE(inst.size() == 1);
    CHECK(inst.job(1).setup == 4);
    CHECK(inst.job(1).processing == 7);
}

TEST_CASE("comments and blank lines are skipped") {
    const Instance inst = parse_instance("# header\n\n2 2\n# job 1\n1 2\n\n3 4\n");
    CHECK(inst == make_instance(2, {{1, 2}, {3, 4}}));
}

TEST_CASE("parse errors carry the line number") {
    auto line_of = [](std::string_view text) {
        try {
            parse_instance(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("2 2\n0 5\n1 1") == 2);
    CHECK(line_of("2 2\n1 5\n1 -1") == 3);
    CHECK(line_of("2 2\n1 5") == 3);
    CHECK(line_of("1 1\n1 5\n2 2") == 3);
    CHECK(line_of("1 x\n1 5") == 1);
    CHECK(line_of("1 1\n1 5 6") == 2);
    CHECK(line_of("") == 1);
    CHECK(line_of("0 1") == 1);

    try {
        parse_instance("2 2\n0 5\n1 1");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("setup") != std::string::npos);
    }
}

TEST_CASE("make_instance rejects bad data") {
    CHECK_THROWS_AS(make_instance(0, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(make_instance(1, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_instance(1, {{1, 0}}), std::invalid_argument);
}

TEST_CASE("render and parse round trip") {
    std::mt19937 gen(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> n_dist(1, 30), m_dist(1, 8), v_dist(1, 100);
        std::vector<std::pair<int, int>> jobs;
        const int n = n_dist(gen);
        for (int j = 0; j < n; ++j) jobs.emplace_back(v_dist(gen), v_dist(gen));
        const Instance inst = make_instance(m_dist(gen), jobs);
        CHECK(parse_instance(render_instance(inst)) == inst);
    }
}

TEST_CASE("grouping of the five-job example") {
    const auto classes = group_identical(testing::five_jobs());
    REQUIRE(classes.size() == 4);
    CHECK(classes[0].setup == 2);
    CHECK(classes[0].processing == 3);
    CHECK(classes[0].multiplicity == 2);
    CHECK(classes[0].representative == 1);
    CHECK(classes[0].job_ids == std::vector<int>{1, 5});
    CHECK(classes[1].setup == 2);
    CHECK(classes[1].processing == 5);
    CHECK(classes[1].job_ids == std::vector<int>{4});
    CHECK(classes[2].job_ids == std::vector<int>{3});
    CHECK(classes[3].job_ids == std::vector<int>{2});
}

TEST_CASE("grouping extremes") {
    const Instance distinct = make_instance(2, {{1, 2}, {2, 2}, {3, 2}});
    CHECK(group_identical(distinct).size() == 3);
    const Instance same = make_instance(2, {{4, 4}, {4, 4}, {4, 4}, {4, 4}});
    const auto classes = group_identical(same);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].multiplicity == 4);
    CHECK(singleton_classes(same).size() == 4);
}

TEST_CASE("generator ranges follow the rounding rule") {
    GenParams g;
    g.n = 10;
    g.m = 3;
    g.alpha = 0.1;
    g.rho = 0.5;
    CHECK(processing_range(g) == IntRange{23, 27});
    CHECK(setup_range(g) == IntRange{4, 4});
    for (const Instance& inst : generate(g)) {
        CHECK(inst.size() == 10);
        for (const Job& j : inst.jobs) {
            CHECK(j.processing >= 23);
            CHECK(j.processing <= 27);
            CHECK(j.setup == 4);
        }
    }

    g.alpha = 0.0;
    CHECK(processing_range(g) == IntRange{25, 25});
    for (const Job& j : generate_one(g, 0).jobs) CHECK(j.processing == 25);
}

TEST_CASE("generator is deterministic per replication") {
    GenParams g;
    g.n = 20;
    g.m = 5;
    g.alpha = 0.5;
    g.rho = 1.0;
    g.replications = 4;
    const auto all = generate(g);
    REQUIRE(all.size() == 4);
    for (int r = 0; r < 4; ++r) CHECK(generate_one(g, r) == all[static_cast<std::size_t>(r)]);
    CHECK(all[0] != all[1]);
    g.seed = 2;
    CHECK(generate_one(g, 0) != all[0]);
}

TEST_CASE("generator rejects invalid parameters") {
    GenParams g;
    g.n = 0;
    CHECK_THROWS_AS(validate(g), std::invalid_argument);
    g = GenParams{};
    g.alpha = 1.5;
    CHECK_THROWS_AS(validate(g), std::invalid_argument);
    g = GenParams{};
    g.rho = 0.0;
    CHECK_THROWS_AS(validate(g), std::invalid_argument);
}

TEST_CASE("benchmark grid sizes") {
    auto count = [](const std::vector<GenParams>& grid, int n, int m) {
        int total = 0;
        for (const GenParams& g : grid)
            if (g.n == n && g.m == m) total += g.replications;
        return total;
    };
    const auto small = benchmark_grid(GridScope::Small);
    CHECK(count(small, 20, 3) == 60);
    CHECK(count(small, 10, 3) + count(small, 10, 4) == 120);

    const auto medium = benchmark_grid(GridScope::Medium);
    CHECK(count(medium, 100, 5) == 40);
    std::set<std::tuple<int, double, double>> patterns;
    for (const GenParams& g : medium) patterns.emplace(g.m, g.alpha, g.rho);
    for (auto p : {std::tuple{3, 0.1, 0.5}, {3, 0.5, 0.5}, {5, 0.1, 0.5}, {5, 0.1, 0.7}, {5, 0.3, 1.0},
                   {7, 0.1, 0.7}, {7, 0.3, 1.0}})
        CHECK(patterns.count(p) == 1);

    const auto large = benchmark_grid(GridScope::Large);
    for (const GenParams& g : large) CHECK((g.n == 150 || g.n == 200));
    CHECK(large.size() == 2 * medium.size());
    CHECK(benchmark_grid(GridScope::All).size() == small.size() + medium.size() + large.size());
    CHECK(parse_grid_scope("medium") == GridScope::Medium);
    CHECK_THROWS(parse_grid_scope("huge"));
}

TEST_CASE("instance labels") {
    GenParams g;
    g.n = 20;
    g.m = 3;
    g.alpha = 0.1;
    g.rho = 0.5;
    CHECK(instance_label(g, 3) == "n20_m3_a0.1_r0.5_#4");
}

TEST_CASE("splitmix uniform stays in range") {
    SplitMix64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        const auto v = rng.uniform(3, 9);
        CHECK(v >= 3);
        CHECK(v <= 9);
    }
    CHECK(SplitMix64::combine({1, 2, 3}) != SplitMix64::combine({1, 2, 4}));
}
