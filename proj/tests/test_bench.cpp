#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "pms/bench.hpp"

using namespace pms;

namespace {

BenchRecord record(ModelKind model, SolveStatus status, std::optional<double> objective, double bound,
                   std::optional<double> lp, double time) {
    BenchRecord r;
    r.instance_id = "x";
    r.n = 10;
    r.m = 3;
    r.alpha = 0.1;
    r.rho = 0.5;
    r.model = model;
    r.status = status;
    r.objective = objective;
    r.best_bound = bound;
    r.lp_bound = lp;
    r.wall_time = time;
    return r;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (sep != '\n' && !line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

TEST_CASE("model names") {
    CHECK(parse_model_kind("FFT-warm") == ModelKind::FFTWarmed);
    CHECK(parse_model_list("fff, tivi,fff") == std::vector<ModelKind>{ModelKind::FFF, ModelKind::TIVI});
    CHECK_THROWS(parse_model_list(""));
    CHECK_THROWS(parse_model_kind("tiv"));
    CHECK(to_string(ModelKind::FFTWarmed) == "FFT-Warmed");
}

TEST_CASE("deviation and gap") {
    CHECK(dev_cr(record(ModelKind::FFF, SolveStatus::Optimal, 20.0, 20.0, 20.0, 1.0)) == doctest::Approx(0.0));
    CHECK(*dev_cr(record(ModelKind::FFF, SolveStatus::Optimal, 20.0, 20.0, 16.0, 1.0)) == doctest::Approx(25.0));
    CHECK_FALSE(dev_cr(record(ModelKind::FFF, SolveStatus::Feasible, 20.0, 18.0, 16.0, 1.0)).has_value());
    CHECK(*gap_bb(record(ModelKind::FFF, SolveStatus::Feasible, 20.0, 18.0, 16.0, 1.0)) == doctest::Approx(10.0));
    CHECK_FALSE(gap_bb(record(ModelKind::FFF, SolveStatus::Optimal, 20.0, 20.0, 16.0, 1.0)).has_value());
    CHECK_FALSE(gap_bb(record(ModelKind::FFF, SolveStatus::TimeLimitNoSolution, std::nullopt, 18.0, 16.0, 1.0))
                    .has_value());
}

TEST_CASE("empty report is the header only") {
    const std::string csv = render_report({}, ReportFormat::Csv, {ModelKind::FFF});
    CHECK(csv == "n,m,alpha,rho,FFF #O,FFF #N,FFF CPU,FFF DEV_CR,FFF GAP_BB\n");
    const std::string md = render_report({}, ReportFormat::Markdown, {ModelKind::FFF});
    CHECK(std::count(md.begin(), md.end(), '\n') == 2);
}

TEST_CASE("indicator conventions, golden") {
    std::vector<BenchRecord> records;
    // FFF: both optimal.
    records.push_back(record(ModelKind::FFF, SolveStatus::Optimal, 20.0, 20.0, 16.0, 1.0));
    records.push_back(record(ModelKind::FFF, SolveStatus::Optimal, 30.0, 30.0, 30.0, 2.0));
    // TIVI: one timeout with incumbent, one without.
    records.push_back(record(ModelKind::TIVI, SolveStatus::Feasible, 20.0, 15.0, 10.0, 5.0));
    records.push_back(record(ModelKind::TIVI, SolveStatus::TimeLimitNoSolution, std::nullopt, 12.0, 10.0, 5.0));
    const auto rows = indicators(records);
    REQUIRE(rows.size() == 1);
    const ModelIndicators& fff = rows[0].per_model.at(ModelKind::FFF);
    CHECK(fff.num_optimal == 2);
    CHECK(fff.num_no_integer == 0);
    CHECK(*fff.mean_cpu == doctest::Approx(1.5));
    CHECK(*fff.mean_dev_cr == doctest::Approx(12.5));
    CHECK_FALSE(fff.mean_gap_bb.has_value());
    const ModelIndicators& tivi = rows[0].per_model.at(ModelKind::TIVI);
    CHECK(tivi.num_optimal == 0);
    CHECK(tivi.num_no_integer == 1);
    CHECK(tivi.num_optimal + tivi.num_no_integer <= tivi.replications);
    CHECK_FALSE(tivi.mean_cpu.has_value());
    CHECK(*tivi.mean_gap_bb == doctest::Approx(25.0));

    const std::vector<ModelKind> models{ModelKind::FFF, ModelKind::TIVI};
    CHECK(render_report(rows, ReportFormat::Csv, models) ==
          "n,m,alpha,rho,FFF #O,FFF #N,FFF CPU,FFF DEV_CR,FFF GAP_BB,TIVI #O,TIVI #N,TIVI CPU,TIVI DEV_CR,TIVI GAP_BB\n"
          "10,3,0.1,0.5,2,0,1.50,12.50,,0,1,†,,25.00\n");
    CHECK(render_report(rows, ReportFormat::Markdown, models) ==
          "| n | m | alpha | rho | FFF #O | FFF #N | FFF CPU | FFF DEV_CR | FFF GAP_BB | TIVI #O | TIVI #N | TIVI CPU | "
          "TIVI DEV_CR | TIVI GAP_BB |\n"
          "|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n"
          "| 10 | 3 | 0.1 | 0.5 | 2 | 0 | 1.50 | 12.50 |  | 0 | 1 | † |  | 25.00 |\n");
}

TEST_CASE("smoke grid") {
    GenParams g;
    g.n = 10;
    g.m = 3;
    g.alpha = 0.1;
    g.rho = 0.5;
    g.replications = 2;
    BenchOptions options;
    options.run.skip_when_tight = false;
    options.jobs = 2;
    const std::vector<ModelKind> models{ModelKind::FFF, ModelKind::TIVI};
    const auto records = run_bench({g}, models, options);
    REQUIRE(records.size() == 4);
    for (const BenchRecord& r : records) {
        CHECK(r.status == SolveStatus::Optimal);
        REQUIRE(r.objective.has_value());
        CHECK(r.lb_better <= *r.objective);
        CHECK(*r.objective <= r.ub);
        REQUIRE(r.lp_bound.has_value());
        CHECK(*dev_cr(r) >= -1e-9);
    }
    CHECK(records[0].instance_id == "n10_m3_a0.1_r0.5_#1");
    CHECK(records[0].model == ModelKind::FFF);
    CHECK(records[1].model == ModelKind::TIVI);
    CHECK(*records[0].objective == *records[1].objective);
    CHECK(*records[2].objective == *records[3].objective);

    // Serial run yields the same records apart from timings.
    options.jobs = 1;
    const auto serial = run_bench({g}, models, options);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(serial[i].instance_id == records[i].instance_id);
        CHECK(serial[i].objective == records[i].objective);
    }

    const std::string md = render_report(indicators(records), ReportFormat::Markdown, models);
    CHECK(md.find("FFF #O") != std::string::npos);
    CHECK(md.find("TIVI GAP_BB") != std::string::npos);
    const std::string csv = render_report(indicators(records), ReportFormat::Csv, models);
    const auto lines = split(csv, '\n');
    REQUIRE(lines.size() == 2);
    auto cells = split(lines[1], ',');
    REQUIRE(cells.size() == 14);
    cells[6] = cells[11] = "CPU";  // timings are not reproducible
    CHECK(cells == split("10,3,0.1,0.5,2,0,CPU," + cells[7] + ",,2,0,CPU," + cells[12] + ",", ','));

    const std::string raw = records_csv(records);
    CHECK(std::count(raw.begin(), raw.end(), '\n') == 5);
    const std::string jsonl = records_jsonl(records);
    std::istringstream in(jsonl);
    std::string first;
    std::getline(in, first);
    const auto doc = nlohmann::json::parse(first);
    CHECK(doc["model"] == "FFF");
    CHECK(doc["status"] == "optimal");
}

TEST_CASE("warm start records the witness makespan") {
    GenParams g;
    g.n = 10;
    g.m = 4;
    g.alpha = 0.3;
    g.rho = 0.7;
    const Instance inst = generate_one(g, 0);
    const BoundReport bounds = horizon_ub(inst);
    RunOptions options;
    options.skip_when_tight = false;
    const ModelRun run = run_model(inst, bounds, ModelKind::FFTWarmed, options);
    REQUIRE(run.warm_start_objective.has_value());
    CHECK(*run.warm_start_objective == doctest::Approx(static_cast<double>(bounds.ub)));
    CHECK(run.status == SolveStatus::Optimal);
    REQUIRE(run.schedule.has_value());
    CHECK(validate(*run.schedule, inst).empty());
}

TEST_CASE("tight bounds skip the MIP") {
    const Instance inst = testing::five_jobs();
    const BoundReport bounds = horizon_ub(inst);
    REQUIRE(bounds.ub == bounds.lb_better);
    const ModelRun run = run_model(inst, bounds, ModelKind::FFF, RunOptions{});
    CHECK(run.mip_skipped);
    CHECK(run.status == SolveStatus::Optimal);
    CHECK(*run.objective == 15.0);
    CHECK(run.lp_bound.has_value());
}

TEST_CASE("forced timeout") {
    GenParams g;
    g.n = 150;
    g.m = 5;
    g.alpha = 0.5;
    g.rho = 0.5;
    const Instance inst = generate_one(g, 0);
    const BoundReport bounds = horizon_ub(inst);
    RunOptions options;
    options.limits.time_limit = 0.01;
    options.compute_lp = false;
    options.skip_when_tight = false;
    const ModelRun run = run_model(inst, bounds, ModelKind::TIVI, options);
    CHECK(run.status != SolveStatus::Optimal);
    CHECK(run.status != SolveStatus::Error);
    const BenchRecord r = make_record(g, 0, bounds, run);
    CHECK(gap_bb(r).has_value() == r.objective.has_value());
    const auto rows = indicators({r});
    const std::string csv = render_report(rows, ReportFormat::Csv, {ModelKind::TIVI});
    const auto cells = split(split(csv, '\n')[1], ',');
    CHECK(cells[4] == "0");
    CHECK(cells[5] == (r.objective ? "0" : "1"));
    CHECK(cells[6] == "†");
    CHECK(cells[7] == "");
    CHECK((cells[8].empty() != r.objective.has_value()));
}

TEST_CASE("backend failures are recorded, not thrown") {
    RunOptions options;
    options.backend = "nonexistent";
    options.skip_when_tight = false;
    const Instance inst = testing::five_jobs();
    const ModelRun run = run_model(inst, horizon_ub(inst), ModelKind::FFF, options);
    CHECK(run.status == SolveStatus::Error);
    CHECK_FALSE(run.message.empty());
}
