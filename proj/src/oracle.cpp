#include "pms/oracle.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

namespace pms {

Schedule dispatch_order(const Instance& inst, const std::vector<int>& order) {
    int server_free = 0;
    std::vector<int> machine_free(static_cast<std::size_t>(inst.machines), 0);
    std::vector<Assignment> out;
    for (int id : order) {
        const Job& j = inst.job(id);
        auto it = std::min_element(machine_free.begin(), machine_free.end());
        const int start = std::max(server_free, *it);
        server_free = start + j.setup;
        *it = start + j.span();
        out.push_back(Assignment{id, static_cast<int>(it - machine_free.begin()) + 1, start, j.setup, j.processing});
    }
    return make_schedule(inst.machines, std::move(out));
}

namespace {

class Search {
public:
    explicit Search(const Instance& inst) : inst_(inst), used_(static_cast<std::size_t>(inst.size()), false) {}

    void run() {
        std::vector<int> machine_free(static_cast<std::size_t>(inst_.machines), 0);
        remaining_setup_ = inst_.total_setup();
        extend(0, machine_free, 0);
    }

    int best = std::numeric_limits<int>::max();
    std::vector<int> best_order;
    std::int64_t leaves = 0;

private:
    int min_remaining_processing() const {
        int best_p = std::numeric_limits<int>::max();
        for (const Job& j : inst_.jobs)
            if (!used_[static_cast<std::size_t>(j.id - 1)]) best_p = std::min(best_p, j.processing);
        return best_p;
    }

    void extend(int server_free, std::vector<int>& machine_free, int makespan) {
        if (order_.size() == inst_.jobs.size()) {
            ++leaves;
            if (makespan < best) {
                best = makespan;
                best_order = order_;
            }
            return;
        }
        const std::int64_t bound = std::max<std::int64_t>(
            makespan, server_free + remaining_setup_ + min_remaining_processing());
        if (bound >= best) return;

        for (const Job& j : inst_.jobs) {
            const auto k = static_cast<std::size_t>(j.id - 1);
            if (used_[k]) continue;
            auto it = std::min_element(machine_free.begin(), machine_free.end());
            const int saved = *it;
            const int start = std::max(server_free, saved);
            *it = start + j.span();
            used_[k] = true;
            remaining_setup_ -= j.setup;
            order_.push_back(j.id);
            extend(start + j.setup, machine_free, std::max(makespan, start + j.span()));
            order_.pop_back();
            remaining_setup_ += j.setup;
            used_[k] = false;
            *it = saved;
        }
    }

    const Instance& inst_;
    std::vector<bool> used_;
    std::vector<int> order_;
    std::int64_t remaining_setup_ = 0;
};

}  // namespace

OracleResult brute_force(const Instance& inst, int cap) {
    if (inst.size() > cap)
        throw OracleLimitError(fmt::format("brute force is limited to {} jobs, instance has {}", cap, inst.size()));
    Search search(inst);
    search.run();
    OracleResult result;
    result.optimum = search.best;
    result.server_order = search.best_order;
    result.witness = dispatch_order(inst, search.best_order);
    result.permutations_explored = search.leaves;
    return result;
}

}  // namespace pms
