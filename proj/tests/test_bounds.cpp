#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "pms/bounds.hpp"

using namespace pms;

TEST_CASE("trivial bound") {
    CHECK(lb_trivial(testing::five_jobs()) == Rational(32, 3));
    CHECK(lb_trivial(make_instance(1, {{4, 7}})) == Rational(11));
    CHECK(lb_trivial(make_instance(2, {{1, 1}, {1, 1}})) == Rational(2));
    CHECK(ceil(Rational(32, 3)) == 11);
    CHECK(ceil(Rational(12, 3)) == 4);
}

TEST_CASE("better bound") {
    CHECK(lb_better(testing::five_jobs()) == 15);
    CHECK(lb_better(make_instance(1, {{4, 7}})) == 11);
}

TEST_CASE("better bound on n = m copies of (1, 10) matches the closed form") {
    for (int n = 1; n <= 12; ++n) {
        const Instance inst = make_instance(n, std::vector<std::pair<int, int>>(static_cast<std::size_t>(n), {1, 10}));
        // max(n + 10, (11n + sum_{j<n} (n - j)) / n), rounded up.
        const std::int64_t weighted = static_cast<std::int64_t>(n) * (n - 1) / 2;
        const std::int64_t expected = std::max<std::int64_t>(n + 10, (11 * n + weighted + n - 1) / n);
        CHECK(lb_better(inst) == expected);
    }
}

TEST_CASE("better bound with more machines than jobs") {
    // Only the n smallest setups exist, so the weighted sum has n terms.
    const Instance inst = make_instance(5, {{3, 4}, {2, 6}});
    // (7 + 8)/5 + (4*2 + 3*3)/5 = 32/5 -> 7; server side 5 + 4 = 9.
    CHECK(lb_better(inst) == 9);
}

TEST_CASE("priority orders on the five-job example") {
    const Instance inst = testing::five_jobs();
    CHECK(order_jobs(inst, PriorityRule::LPT) == std::vector<int>{2, 4, 3, 1, 5});
    CHECK(order_jobs(inst, PriorityRule::SPT) == std::vector<int>{1, 5, 3, 4, 2});
    CHECK(order_jobs(inst, PriorityRule::SST) == std::vector<int>{1, 5, 4, 3, 2});
    CHECK(order_jobs(inst, PriorityRule::LST) == std::vector<int>{2, 3, 4, 1, 5});
    // spans 5, 8, 7, 7, 5: jobs 3 and 4 tie on 7 and SPT puts 3 (p = 4) first.
    CHECK(order_jobs(inst, PriorityRule::SCT) == std::vector<int>{1, 5, 3, 4, 2});
    CHECK(order_jobs(inst, PriorityRule::LCT) == std::vector<int>{2, 4, 3, 1, 5});
}

TEST_CASE("identical jobs keep id order under every rule") {
    const Instance inst = make_instance(2, {{2, 2}, {2, 2}, {2, 2}, {2, 2}});
    for (PriorityRule rule : kAllRules) CHECK(order_jobs(inst, rule) == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("heuristics on small cases") {
    const Instance single_machine = make_instance(1, {{2, 3}, {1, 4}, {5, 1}});
    for (PriorityRule rule : kAllRules) {
        CHECK(greedy_hs1(single_machine, rule).makespan == 16);
        CHECK(greedy_hs2(single_machine, rule).makespan == 16);
    }
    const Instance one = make_instance(3, {{4, 7}});
    CHECK(greedy_hs1(one, PriorityRule::SPT).makespan == 11);
    CHECK(greedy_hs2(one, PriorityRule::SPT).makespan == 11);

    const Instance chain = make_instance(2, {{1, 10}, {1, 10}});
    const Schedule s = greedy_hs2(chain, PriorityRule::SPT);
    CHECK(s.makespan == 12);
    CHECK(s.assignments[0].setup_start == 0);
    CHECK(s.assignments[1].setup_start == 1);
}

TEST_CASE("heuristics on the five-job example are feasible and bounded") {
    const Instance inst = testing::five_jobs();
    for (PriorityRule rule : kAllRules) {
        for (const Schedule& s : {greedy_hs1(inst, rule), greedy_hs2(inst, rule)}) {
            CHECK(validate(s, inst).empty());
            CHECK(s.makespan >= 15);
            CHECK(s.makespan <= 32);
        }
    }
    const BoundReport b = horizon_ub(inst);
    CHECK(b.ub == 15);
    CHECK(b.ub_witness.makespan == 15);
    CHECK(b.winning_heuristic == Heuristic::HS1);
    CHECK(b.winning_rule == PriorityRule::LPT);
}

TEST_CASE("hs2 lookahead width") {
    CHECK(hs2_lookahead(5) == 1);
    CHECK(hs2_lookahead(10) == 2);
    CHECK(hs2_lookahead(29) == 3);
}

TEST_CASE("bound report ordering on random instances") {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<int> n_dist(1, 25), m_dist(1, 6), v_dist(1, 30);
        std::vector<std::pair<int, int>> jobs;
        const int n = n_dist(gen);
        for (int j = 0; j < n; ++j) jobs.emplace_back(v_dist(gen), v_dist(gen));
        const Instance inst = make_instance(m_dist(gen), jobs);
        const BoundReport b = horizon_ub(inst);
        CHECK(b.lb_trivial_int <= b.lb_better);
        CHECK(b.lb_better <= b.ub);
        CHECK(b.ub == b.ub_witness.makespan);
        CHECK(validate(b.ub_witness, inst).empty());
        if (n == 1) CHECK(b.ub == b.lb_better);
    }
}
