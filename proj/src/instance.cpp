#include "pms/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <span>
#include <sstream>

#include <fmt/format.h>

#include "pms/rng.hpp"

namespace pms {

std::int64_t Instance::total_setup() const {
    std::int64_t sum = 0;
    for (const Job& j : jobs) sum += j.setup;
    return sum;
}

std::int64_t Instance::total_work() const {
    std::int64_t sum = 0;
    for (const Job& j : jobs) sum += j.span();
    return sum;
}

int Instance::max_span() const {
    int best = 0;
    for (const Job& j : jobs) best = std::max(best, j.span());
    return best;
}

Instance make_instance(int machines, const std::vector<std::pair<int, int>>& setup_processing) {
    if (machines < 1) throw std::invalid_argument("machine count must be at least 1");
    if (setup_processing.empty()) throw std::invalid_argument("an instance needs at least one job");
    Instance inst;
    inst.machines = machines;
    int id = 1;
    for (auto [s, p] : setup_processing) {
        if (s < 1 || p < 1)
            throw std::invalid_argument(fmt::format("job {} has a nonpositive setup or processing time", id));
        inst.jobs.push_back(Job{id++, s, p});
    }
    return inst;
}

ParseError::ParseError(int line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

int parse_int(std::string_view token, int line, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError(line, fmt::format("{} '{}' is not an integer", what, token));
    return value;
}

bool skippable(std::string_view line) {
    auto fields = split_ws(line);
    return fields.empty() || fields.front().front() == '#';
}

}  // namespace

Instance parse_instance(std::istream& in) {
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!skippable(line)) return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError(lineno + 1, "missing header \"n m\"");
    auto header = split_ws(line);
    if (header.size() != 2) throw ParseError(lineno, "header must contain exactly \"n m\"");
    const int n = parse_int(header[0], lineno, "job count");
    const int m = parse_int(header[1], lineno, "machine count");
    if (n < 1) throw ParseError(lineno, "job count must be positive");
    if (m < 1) throw ParseError(lineno, "machine count must be positive");

    Instance inst;
    inst.machines = m;
    inst.jobs.reserve(static_cast<std::size_t>(n));
    for (int id = 1; id <= n; ++id) {
        if (!next_line())
            throw ParseError(lineno + 1, fmt::format("expected {} job lines, found {}", n, id - 1));
        auto fields = split_ws(line);
        if (fields.size() != 2) throw ParseError(lineno, "job line must contain \"s_j p_j\"");
        const int s = parse_int(fields[0], lineno, "setup");
        const int p = parse_int(fields[1], lineno, "processing");
        if (s < 1) throw ParseError(lineno, "nonpositive setup");
        if (p < 1) throw ParseError(lineno, "nonpositive processing");
        inst.jobs.push_back(Job{id, s, p});
    }
    if (next_line()) throw ParseError(lineno, fmt::format("more than {} job lines", n));
    return inst;
}

Instance parse_instance(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_instance(in);
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path);
    return parse_instance(in);
}

std::string render_instance(const Instance& inst) {
    std::string out = fmt::format("{} {}\n", inst.size(), inst.machines);
    for (const Job& j : inst.jobs) out += fmt::format("{} {}\n", j.setup, j.processing);
    return out;
}

std::vector<JobClass> group_identical(const Instance& inst) {
    std::map<std::pair<int, int>, JobClass> by_key;
    for (const Job& j : inst.jobs) {
        JobClass& c = by_key[{j.setup, j.processing}];
        c.setup = j.setup;
        c.processing = j.processing;
        c.job_ids.push_back(j.id);
    }
    std::vector<JobClass> classes;
    classes.reserve(by_key.size());
    for (auto& [key, c] : by_key) {
        std::sort(c.job_ids.begin(), c.job_ids.end());
        c.multiplicity = static_cast<int>(c.job_ids.size());
        c.representative = c.job_ids.front();
        classes.push_back(std::move(c));
    }
    return classes;
}

std::vector<JobClass> singleton_classes(const Instance& inst) {
    std::vector<JobClass> classes;
    classes.reserve(inst.jobs.size());
    for (const Job& j : inst.jobs) classes.push_back(JobClass{j.setup, j.processing, 1, j.id, {j.id}});
    return classes;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::int64_t kMeanProcessing = 25;
constexpr std::int64_t kPermille = 1000;

std::int64_t permille(double x) { return std::llround(x * kPermille); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }
std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Inclusive integer range inside [lo_num/den, hi_num/den]; the rounded lower
// end when that range is empty. Values are clamped to >= 1.
IntRange integer_range(std::int64_t lo_num, std::int64_t hi_num, std::int64_t den) {
    std::int64_t lo = ceil_div(lo_num, den);
    std::int64_t hi = floor_div(hi_num, den);
    if (lo > hi) lo = hi = floor_div(2 * lo_num + den, 2 * den);
    lo = std::max<std::int64_t>(lo, 1);
    hi = std::max(hi, lo);
    return {static_cast<int>(lo), static_cast<int>(hi)};
}

}  // namespace

void validate(const GenParams& params) {
    if (params.n < 1) throw std::invalid_argument("n must be at least 1");
    if (params.m < 1) throw std::invalid_argument("m must be at least 1");
    if (!(params.alpha >= 0.0 && params.alpha < 1.0)) throw std::invalid_argument("alpha must lie in [0, 1)");
    if (!(params.rho > 0.0 && params.rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
    if (params.replications < 1) throw std::invalid_argument("replications must be at least 1");
}

IntRange processing_range(const GenParams& params) {
    const std::int64_t a = permille(params.alpha);
    return integer_range((kPermille - a) * kMeanProcessing, (kPermille + a) * kMeanProcessing, kPermille);
}

IntRange setup_range(const GenParams& params) {
    const std::int64_t a = permille(params.alpha);
    const std::int64_t r = permille(params.rho);
    const std::int64_t den = kPermille * kPermille * params.m;
    return integer_range((kPermille - a) * r * kMeanProcessing, (kPermille + a) * r * kMeanProcessing, den);
}

Instance generate_one(const GenParams& params, int replication) {
    validate(params);
    const IntRange p_range = processing_range(params);
    const IntRange s_range = setup_range(params);
    SplitMix64 rng(SplitMix64::combine({params.seed, static_cast<std::uint64_t>(params.n),
                                        static_cast<std::uint64_t>(params.m),
                                        static_cast<std::uint64_t>(permille(params.alpha)),
                                        static_cast<std::uint64_t>(permille(params.rho)),
                                        static_cast<std::uint64_t>(replication)}));
    Instance inst;
    inst.machines = params.m;
    inst.jobs.reserve(static_cast<std::size_t>(params.n));
    for (int id = 1; id <= params.n; ++id) {
        const int p = static_cast<int>(rng.uniform(p_range.lo, p_range.hi));
        const int s = static_cast<int>(rng.uniform(s_range.lo, s_range.hi));
        inst.jobs.push_back(Job{id, s, p});
    }
    return inst;
}

std::vector<Instance> generate(const GenParams& params) {
    validate(params);
    std::vector<Instance> out;
    out.reserve(static_cast<std::size_t>(params.replications));
    for (int r = 0; r < params.replications; ++r) out.push_back(generate_one(params, r));
    return out;
}

GridScope parse_grid_scope(std::string_view text) {
    if (text == "small") return GridScope::Small;
    if (text == "medium") return GridScope::Medium;
    if (text == "large") return GridScope::Large;
    if (text == "all") return GridScope::All;
    throw std::invalid_argument(fmt::format("unknown grid scope '{}'", text));
}

std::vector<GenParams> benchmark_grid(GridScope scope, std::uint64_t seed) {
    struct Combo {
        double alpha, rho;
    };
    // (alpha, rho) rows used for n = 10 and n = 20.
    static constexpr Combo kSmallRows[] = {{0.1, 0.5}, {0.1, 1.0}, {0.3, 0.5},
                                           {0.3, 0.7}, {0.5, 0.7}, {0.5, 1.0}};
    static constexpr Combo kRowsM3[] = {{0.1, 0.5}, {0.5, 0.5}};
    static constexpr Combo kRowsM5[] = {{0.1, 0.5}, {0.5, 0.5}, {0.1, 0.7}, {0.3, 1.0}};
    static constexpr Combo kRowsM7[] = {{0.1, 0.7}, {0.3, 1.0}};

    std::vector<GenParams> grid;
    auto add = [&](int n, int m, std::span<const Combo> rows) {
        for (const Combo& c : rows) grid.push_back(GenParams{n, m, c.alpha, c.rho, seed, 10});
    };
    const bool small = scope == GridScope::Small || scope == GridScope::All;
    const bool medium = scope == GridScope::Medium || scope == GridScope::All;
    const bool large = scope == GridScope::Large || scope == GridScope::All;
    if (small) {
        add(10, 3, kSmallRows);
        add(10, 4, kSmallRows);
        add(20, 3, kSmallRows);
        add(50, 3, kRowsM3);
        add(50, 7, kRowsM7);
    }
    auto add_extended = [&](int n) {
        add(n, 3, kRowsM3);
        add(n, 5, kRowsM5);
        add(n, 7, kRowsM7);
    };
    if (medium) add_extended(100);
    if (large) {
        add_extended(150);
        add_extended(200);
    }
    return grid;
}

std::string instance_label(const GenParams& params, int replication) {
    return fmt::format("n{}_m{}_a{}_r{}_#{}", params.n, params.m, params.alpha, params.rho, replication + 1);
}

}  // namespace pms
