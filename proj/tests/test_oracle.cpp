#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "pms/bounds.hpp"
#include "pms/oracle.hpp"

using namespace pms;

namespace {

// With m >= n only the server binds: min over orders of max_k (S_k + p_(k)).
int chaining_optimum(const Instance& inst) {
    std::vector<int> order(static_cast<std::size_t>(inst.size()));
    std::iota(order.begin(), order.end(), 1);
    int best = std::numeric_limits<int>::max();
    do {
        int clock = 0;
        int finish = 0;
        for (int id : order) {
            clock += inst.job(id).setup;
            finish = std::max(finish, clock + inst.job(id).processing);
        }
        best = std::min(best, finish);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

}  // namespace

TEST_CASE("five-job example") {
    const Instance inst = testing::five_jobs();
    const OracleResult r = brute_force(inst);
    CHECK(r.optimum == 15);
    CHECK(validate(r.witness, inst).empty());
    CHECK(r.witness.makespan == 15);

    const Schedule listed = dispatch_order(inst, {2, 4, 3, 1, 5});
    CHECK(listed.makespan == 15);
    std::vector<std::pair<int, int>> setups;
    for (const Assignment& a : listed.assignments) setups.emplace_back(a.setup_start, a.setup_end());
    CHECK(setups == std::vector<std::pair<int, int>>{{0, 3}, {3, 5}, {5, 8}, {8, 10}, {10, 12}});
}

TEST_CASE("single job") {
    CHECK(brute_force(make_instance(2, {{4, 7}})).optimum == 11);
}

TEST_CASE("cap") {
    const Instance nine = make_instance(2, std::vector<std::pair<int, int>>(9, {1, 1}));
    CHECK_THROWS_AS(brute_force(nine), OracleLimitError);
    CHECK(brute_force(nine, 9).optimum >= lb_better(nine));
}

TEST_CASE("server chaining when machines are plentiful") {
    std::mt19937 gen(3);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> n_dist(1, 6), v_dist(1, 9);
        std::vector<std::pair<int, int>> jobs;
        const int n = n_dist(gen);
        for (int j = 0; j < n; ++j) jobs.emplace_back(v_dist(gen), v_dist(gen));
        const Instance inst = make_instance(n + trial % 2, jobs);
        CHECK(brute_force(inst).optimum == chaining_optimum(inst));
    }
}

TEST_CASE("relabelling jobs does not change the optimum") {
    std::mt19937 gen(9);
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<int> n_dist(2, 7), m_dist(1, 3), v_dist(1, 12);
        std::vector<std::pair<int, int>> jobs;
        const int n = n_dist(gen);
        for (int j = 0; j < n; ++j) jobs.emplace_back(v_dist(gen), v_dist(gen));
        const int m = m_dist(gen);
        const OracleResult a = brute_force(make_instance(m, jobs));
        std::shuffle(jobs.begin(), jobs.end(), gen);
        const OracleResult b = brute_force(make_instance(m, jobs));
        CHECK(a.optimum == b.optimum);
        const Instance inst = make_instance(m, jobs);
        const BoundReport bounds = horizon_ub(inst);
        CHECK(bounds.lb_better <= b.optimum);
        CHECK(b.optimum <= bounds.ub);
    }
}
