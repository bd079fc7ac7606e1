#pragma once

// Problem data for Pm|S1|Cmax: identical parallel machines sharing one setup
// server. Every job needs s_j units on the server (setup) immediately followed
// by p_j units on the machine that was reserved when the setup began.

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pms {

struct Job {
    int id = 0;
    int setup = 0;
    int processing = 0;

    int span() const { return setup + processing; }
    friend bool operator==(const Job&, const Job&) = default;
};

struct Instance {
    std::vector<Job> jobs;  // ids are 1..n in order
    int machines = 1;

    int size() const { return static_cast<int>(jobs.size()); }
    const Job& job(int id) const { return jobs.at(static_cast<std::size_t>(id - 1)); }

    std::int64_t total_setup() const;
    std::int64_t total_work() const;  // sum of s_j + p_j
    int max_span() const;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Builds an instance from (setup, processing) pairs, numbering jobs 1..n.
/// Throws std::invalid_argument on a nonpositive value, n == 0 or m < 1.
Instance make_instance(int machines, const std::vector<std::pair<int, int>>& setup_processing);

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// Reads the canonical text format: "n m" then n lines "s_j p_j".
/// Lines starting with '#' and blank lines are skipped.
Instance parse_instance(std::istream& in);
Instance parse_instance(std::string_view text);
Instance read_instance_file(const std::string& path);

std::string render_instance(const Instance& inst);

/// Identical jobs collapsed into one representative with a multiplicity.
struct JobClass {
    int setup = 0;
    int processing = 0;
    int multiplicity = 0;
    int representative = 0;    // smallest job id in the class
    std::vector<int> job_ids;  // ascending

    int span() const { return setup + processing; }
};

/// Classes sorted by (setup, processing).
std::vector<JobClass> group_identical(const Instance& inst);

/// One class per job, in job order. Used by the ungrouped arc-flow model.
std::vector<JobClass> singleton_classes(const Instance& inst);

// ---------------------------------------------------------------------------
// Random generator

struct GenParams {
    int n = 10;
    int m = 3;
    double alpha = 0.1;  // spread of the uniform ranges
    double rho = 0.5;    // server load factor; mean setup is (rho/m)*25
    std::uint64_t seed = 1;
    int replications = 10;

    friend bool operator==(const GenParams&, const GenParams&) = default;
};

void validate(const GenParams& params);

/// Closed integer range [lo, hi] a draw may take.
struct IntRange {
    int lo = 0;
    int hi = 0;
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

IntRange processing_range(const GenParams& params);
IntRange setup_range(const GenParams& params);

/// Returns `params.replications` instances. Replication r (0-based) is seeded
/// from (seed, n, m, alpha, rho, r) only, so any single replication can be
/// regenerated on its own.
std::vector<Instance> generate(const GenParams& params);
Instance generate_one(const GenParams& params, int replication);

enum class GridScope { Small, Medium, Large, All };

GridScope parse_grid_scope(std::string_view text);

/// Parameter combinations of the standard benchmark grid, 10 replications each.
/// small: n in {10, 20, 50}; medium: n = 100; large: n in {150, 200}.
std::vector<GenParams> benchmark_grid(GridScope scope, std::uint64_t seed = 1);

/// Stable identifier such as "n20_m3_a0.1_r0.5_#4" (replication is 1-based).
std::string instance_label(const GenParams& params, int replication);

}  // namespace pms
