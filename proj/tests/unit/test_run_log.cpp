#include "dynas/run_log.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dynas;

namespace {

RunRecord sample_record() {
    RunRecord r;
    r.trace.algorithm_label = "CMA-ES";
    r.trace.problem = {14, 2, 3};
    r.trace.run_index = 4;
    r.trace.seed = 0xfedcba9876543210ULL;
    r.trace.budget = 20000;
    r.trace.evals_used = 812;
    r.trace.best_precision = 3.2e-9;
    r.trace.terminated_reason = TerminationReason::target_hit;
    for (int k = 0; k <= 50; ++k) r.trace.hit_at[k] = 10 + 15 * k;
    return r;
}

}  // namespace

TEST_CASE("run records round-trip") {
    const RunRecord r = sample_record();
    const std::string line = to_log_line(r);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(parse_log_line(line) == r);
    CHECK(to_log_line(parse_log_line(line)) == line);
}

TEST_CASE("switch fields round-trip") {
    RunRecord r = sample_record();
    r.trace.algorithm_label = "BFGS>CMA-ES@-5.4";
    SwitchInfo s;
    s.a1 = "BFGS";
    s.a2 = "CMA-ES";
    s.tau = TargetGrid::target(37);
    s.switch_eval = 130;
    s.phase1_reason = TerminationReason::target_hit;
    s.phase2_reason = TerminationReason::target_hit;
    s.phase1_evals = 130;
    s.phase2_evals = 682;
    r.switching = s;
    CHECK(parse_log_line(to_log_line(r)) == r);
}

TEST_CASE("unsuccessful runs keep infinity and sparse hits") {
    RunRecord r = sample_record();
    r.trace.best_precision = std::numeric_limits<double>::infinity();
    r.trace.hit_at.fill(std::nullopt);
    r.trace.terminated_reason = TerminationReason::algorithm_converged;
    const std::string line = to_log_line(r);
    CHECK(line.find("\"best_precision\":null") != std::string::npos);
    CHECK(line.find("\"hit_at\":[]") != std::string::npos);
    CHECK(parse_log_line(line) == r);
}

TEST_CASE("malformed lines are skipped and counted") {
    std::stringstream io;
    io << to_log_line(sample_record()) << '\n'
       << "{not json\n"
       << "\n"
       << R"({"algorithm_label":"X"})" << '\n'
       << to_log_line(sample_record()) << '\n';
    const RunLog log = read_run_log(io);
    CHECK(log.records.size() == 2);
    CHECK(log.malformed_lines == 2);
    CHECK_THROWS_AS(parse_log_line("[]"), UsageError);
}

TEST_CASE("directories are read in file-name order") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "dynas_run_log_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    RunRecord a = sample_record(), b = sample_record();
    b.trace.run_index = 9;
    std::ofstream(dir / "b.jsonl") << to_log_line(b) << '\n';
    std::ofstream(dir / "a.jsonl") << to_log_line(a) << '\n';
    std::ofstream(dir / "notes.txt") << "ignored\n";
    const RunLog log = read_run_logs(dir);
    REQUIRE(log.records.size() == 2);
    CHECK(log.records[0].trace.run_index == 4);
    CHECK(log.records[1].trace.run_index == 9);
    CHECK_THROWS_AS(read_run_logs(dir / "missing"), UsageError);
    fs::remove_all(dir);
}
