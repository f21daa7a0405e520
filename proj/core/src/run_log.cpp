#include "dynas/run_log.hpp"

#include "dynas/problems.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace dynas {

namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

}  // namespace

std::string to_log_line(const RunRecord& record) {
    const RunTrace& t = record.trace;
    ordered_json j;
    j["algorithm_label"] = t.algorithm_label;
    j["function_id"] = t.problem.function_id;
    j["dimension"] = t.problem.dimension;
    j["instance"] = t.problem.instance;
    j["run_index"] = t.run_index;
    j["seed"] = t.seed;
    j["budget"] = t.budget;
    j["evals_used"] = t.evals_used;
    j["final_target"] = t.final_target;
    j["best_precision"] = number_or_null(t.best_precision);
    j["terminated_reason"] = std::string(to_string(t.terminated_reason));
    ordered_json hits = ordered_json::array();
    for (int k = 0; k < TargetGrid::size; ++k) {
        if (t.hit_at[k]) hits.push_back(ordered_json::array({TargetGrid::exponent(k), *t.hit_at[k]}));
    }
    j["hit_at"] = std::move(hits);

    if (record.switching) {
        const SwitchInfo& s = *record.switching;
        ordered_json sw;
        sw["a1"] = s.a1;
        sw["a2"] = s.a2;
        sw["tau_exponent"] = TargetGrid::exponent(TargetGrid::nearest_index(s.tau));
        sw["switch_eval"] = s.switch_eval ? ordered_json(*s.switch_eval) : ordered_json(nullptr);
        sw["phase1_reason"] = std::string(to_string(s.phase1_reason));
        sw["phase2_reason"] =
            s.phase2_reason ? ordered_json(std::string(to_string(*s.phase2_reason))) : ordered_json(nullptr);
        sw["phase1_evals"] = s.phase1_evals;
        sw["phase2_evals"] = s.phase2_evals;
        sw["early_switch"] = s.early_switch;
        j["switch"] = std::move(sw);
    }
    return j.dump();
}

RunRecord parse_log_line(std::string_view line) {
    RunRecord record;
    try {
        const auto j = nlohmann::json::parse(line);
        RunTrace& t = record.trace;
        t.algorithm_label = j.at("algorithm_label").get<std::string>();
        t.problem.function_id = j.at("function_id").get<int>();
        t.problem.dimension = j.at("dimension").get<int>();
        t.problem.instance = j.at("instance").get<int>();
        t.run_index = j.at("run_index").get<int>();
        t.seed = j.value("seed", std::uint64_t{0});
        t.budget = j.at("budget").get<EvalCount>();
        t.evals_used = j.at("evals_used").get<EvalCount>();
        t.final_target = j.value("final_target", 1e-8);
        const auto& bp = j.at("best_precision");
        t.best_precision = bp.is_null() ? std::numeric_limits<double>::infinity() : bp.get<double>();
        t.terminated_reason = parse_termination_reason(j.at("terminated_reason").get<std::string>());
        for (const auto& pair : j.at("hit_at")) {
            const int k = TargetGrid::index_of_exponent(pair.at(0).get<double>());
            t.hit_at[k] = pair.at(1).get<EvalCount>();
        }
        if (t.evals_used < 0 || t.evals_used > t.budget) {
            throw UsageError("evals_used outside [0, budget]");
        }

        if (const auto it = j.find("switch"); it != j.end() && !it->is_null()) {
            const auto& sw = *it;
            SwitchInfo s;
            s.a1 = sw.at("a1").get<std::string>();
            s.a2 = sw.at("a2").get<std::string>();
            s.tau = TargetGrid::target(TargetGrid::index_of_exponent(sw.at("tau_exponent").get<double>()));
            if (!sw.at("switch_eval").is_null()) s.switch_eval = sw.at("switch_eval").get<EvalCount>();
            s.phase1_reason = parse_termination_reason(sw.at("phase1_reason").get<std::string>());
            if (!sw.at("phase2_reason").is_null()) {
                s.phase2_reason = parse_termination_reason(sw.at("phase2_reason").get<std::string>());
            }
            s.phase1_evals = sw.at("phase1_evals").get<EvalCount>();
            s.phase2_evals = sw.at("phase2_evals").get<EvalCount>();
            s.early_switch = sw.value("early_switch", false);
            record.switching = std::move(s);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed run-log line: ") + e.what());
    }
    return record;
}

void write_run_log(std::ostream& out, std::span<const RunRecord> records) {
    for (const auto& r : records) out << to_log_line(r) << '\n';
}

RunLog read_run_log(std::istream& in) {
    RunLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            log.records.push_back(parse_log_line(line));
        } catch (const UsageError&) {
            ++log.malformed_lines;
        }
    }
    return log;
}

RunLog read_run_logs(const std::filesystem::path& file_or_directory) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    if (fs::is_directory(file_or_directory)) {
        for (const auto& entry : fs::directory_iterator(file_or_directory)) {
            if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    } else if (fs::exists(file_or_directory)) {
        files.push_back(file_or_directory);
    } else {
        throw UsageError("run log path does not exist: " + file_or_directory.string());
    }

    RunLog all;
    for (const auto& file : files) {
        std::ifstream in(file);
        RunLog part = read_run_log(in);
        all.malformed_lines += part.malformed_lines;
        std::move(part.records.begin(), part.records.end(), std::back_inserter(all.records));
    }
    return all;
}

}  // namespace dynas
