#include "cli.hpp"

#include "dynas/log.hpp"
#include "dynas/parallel.hpp"
#include "dynas/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#ifndef DYNAS_VERSION
#define DYNAS_VERSION "unknown"
#endif

namespace dynas::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "-";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out << std::setprecision(10) << v;
    return out.str();
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

nlohmann::ordered_json spec_json(const ExperimentSpec& spec) {
    nlohmann::ordered_json j;
    std::vector<std::string> algorithms;
    for (Algorithm a : spec.algorithms) algorithms.emplace_back(to_string(a));
    j["algorithms"] = algorithms;
    j["functions"] = spec.functions;
    j["dimensions"] = spec.dimensions;
    j["instances"] = spec.instances;
    j["runs"] = spec.runs;
    j["budget_multiplier"] = spec.budget_multiplier;
    j["phi"] = spec.phi;
    j["seed"] = spec.seed;
    j["suite_seed"] = spec.suite_seed;
    j["early_switch"] = spec.early_switch;
    j["settings"] = nlohmann::ordered_json::parse(settings_to_json(spec.settings));
    return j;
}

// The manifest carries no timestamps so reruns stay byte-identical.
void write_manifest(const fs::path& dir, std::string_view command, const nlohmann::ordered_json& details) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["version"] = DYNAS_VERSION;
    j["spec"] = details;
    auto out = open_output(dir / ("manifest_" + std::string(command) + ".json"));
    out << j.dump(2) << '\n';
}

OptimizerConfig config_for(const ExperimentSpec& spec, Algorithm algorithm) {
    OptimizerConfig config = spec.settings.optimizers;
    config.algorithm = algorithm;
    return config;
}

void print_cell_summary(std::ostream& out, const std::vector<RunRecord>& records, double phi) {
    const int phi_index = TargetGrid::nearest_index(phi);
    std::map<std::tuple<std::string, int, int>, std::pair<int, int>> cells;
    for (const auto& r : records) {
        auto& [hits, runs] = cells[{r.trace.algorithm_label, r.trace.problem.function_id, r.trace.problem.dimension}];
        ++runs;
        if (r.trace.hit_at[phi_index]) ++hits;
    }
    for (const auto& [key, counts] : cells) {
        const auto& [label, f, d] = key;
        out << label << " F" << f << " d=" << d << ": " << counts.first << '/' << counts.second << " reached "
            << fmt(phi) << '\n';
    }
}

}  // namespace

void ExperimentSpec::validate() const {
    if (algorithms.empty()) throw ConfigError("no algorithms selected");
    if (functions.empty() || dimensions.empty() || instances.empty()) {
        throw ConfigError("functions, dimensions and instances must be non-empty");
    }
    for (int f : functions) {
        for (int d : dimensions) {
            for (int i : instances) dynas::validate(ProblemId{f, d, i});
        }
    }
    if (runs < 1) throw ConfigError("--runs must be >= 1");
    if (budget_multiplier < 1) throw ConfigError("--budget-mult must be >= 1");
    if (!(phi > 0.0)) throw ConfigError("--phi must be > 0");
    if (jobs < 1) throw ConfigError("--jobs must be >= 1");
    settings.optimizers.validate();
    settings.policy.validate();
}

std::uint64_t cell_seed(std::uint64_t master, std::string_view label, const ProblemId& id, int run) {
    return derive_seed(master, label, id.function_id, id.dimension, id.instance, run);
}

BatchResult bench_records(const ExperimentSpec& spec, std::ostream& err) {
    spec.validate();
    struct Cell {
        Algorithm algorithm;
        ProblemId id;
        int run;
    };
    std::vector<Cell> cells;
    for (Algorithm a : spec.algorithms) {
        for (int f : spec.functions) {
            for (int d : spec.dimensions) {
                for (int i : spec.instances) {
                    for (int r = 0; r < spec.runs; ++r) cells.push_back({a, {f, d, i}, r});
                }
            }
        }
    }

    std::vector<std::optional<RunRecord>> slots(cells.size());
    std::mutex err_mutex;
    parallel_for(cells.size(), spec.jobs, [&](std::size_t k) {
        const Cell& c = cells[k];
        try {
            const ProblemInstance problem = instantiate(c.id, spec.suite_seed);
            OptimizerConfig config = config_for(spec, c.algorithm);
            config.rng_seed = cell_seed(spec.seed, to_string(c.algorithm), c.id, c.run);
            RunRecord record;
            record.trace = run_single(config, problem, spec.budget(c.id.dimension), spec.phi);
            record.trace.run_index = c.run;
            slots[k] = std::move(record);
        } catch (const std::exception& e) {
            std::lock_guard lock(err_mutex);
            err << "cell " << to_string(c.algorithm) << " F" << c.id.function_id << " d=" << c.id.dimension
                << " i=" << c.id.instance << " run " << c.run << " failed: " << e.what() << '\n';
        }
    });

    BatchResult result;
    for (auto& slot : slots) {
        if (slot) {
            result.records.push_back(std::move(*slot));
        } else {
            ++result.failures;
        }
    }
    return result;
}

BatchResult switch_records(const ExperimentSpec& spec, const SwitchPlan& plan, int function_id, int dimension,
                           std::ostream& err) {
    const SwitchPlan checked = validated(plan);
    const std::string label = checked.label();
    const std::size_t per_instance = static_cast<std::size_t>(spec.runs);
    const std::size_t count = spec.instances.size() * per_instance;
    std::vector<std::optional<RunRecord>> slots(count);
    std::mutex err_mutex;
    parallel_for(count, spec.jobs, [&](std::size_t k) {
        const ProblemId id{function_id, dimension, spec.instances[k / per_instance]};
        const int run = static_cast<int>(k % per_instance);
        try {
            const ProblemInstance problem = instantiate(id, spec.suite_seed);
            SwitchTrace st = run_switch(checked, problem, spec.budget(dimension), cell_seed(spec.seed, label, id, run));
            st.trace.run_index = run;
            slots[k] = st.record();
        } catch (const std::exception& e) {
            std::lock_guard lock(err_mutex);
            err << "switch " << label << " F" << id.function_id << " d=" << id.dimension << " i=" << id.instance
                << " run " << run << " failed: " << e.what() << '\n';
        }
    });
    BatchResult result;
    for (auto& slot : slots) {
        if (slot) {
            result.records.push_back(std::move(*slot));
        } else {
            ++result.failures;
        }
    }
    return result;
}

int cmd_bench(const ExperimentSpec& spec, std::ostream& out, std::ostream& err) {
    spec.validate();
    ensure_directory(spec.out / "logs");
    write_manifest(spec.out, "bench", spec_json(spec));
    const BatchResult batch = bench_records(spec, err);
    {
        auto log = open_output(spec.out / "logs" / "bench.jsonl");
        write_run_log(log, batch.records);
    }
    print_cell_summary(out, batch.records, spec.phi);
    out << batch.records.size() << " runs written to " << (spec.out / "logs" / "bench.jsonl").string();
    if (batch.failures > 0) out << ", " << batch.failures << " failed";
    out << '\n';
    return batch.failures > 0 ? kExitPartial : kExitOk;
}

int cmd_analyze(const fs::path& logs, const fs::path& out_dir, double phi, std::ostream& out, std::ostream& err) {
    const RunLog log = read_run_logs(logs);
    if (log.malformed_lines > 0) err << "skipped " << log.malformed_lines << " malformed log lines\n";
    if (log.records.empty()) {
        err << "no parseable run logs under " << logs.string() << '\n';
        return kExitUsage;
    }
    const int phi_index = TargetGrid::nearest_index(phi);
    if (phi_index < 1) throw ConfigError("--phi must be below the easiest grid target");

    ensure_directory(out_dir);
    nlohmann::ordered_json details;
    details["logs"] = logs.string();
    details["phi"] = TargetGrid::target(phi_index);
    details["records"] = log.records.size();
    details["malformed_lines"] = log.malformed_lines;
    write_manifest(out_dir, "analyze", details);

    const std::vector<ErtTable> tables = build_ert_tables(log.records);
    std::vector<VbsReport> reports = vbs_reports(tables, phi_index);
    for (auto& r : reports) {
        if (!r.is_switch()) continue;
        const std::string label = switch_label(r.a1, r.a2, r.tau_index);
        for (const auto& t : tables) {
            if (t.algorithm_label == label && t.function_id == r.function_id && t.dimension == r.dimension) {
                r.actual_ert = t.ert[phi_index];
            }
        }
    }
    const std::vector<UseCase> cases = use_case_table(reports);

    auto ert_out = open_output(out_dir / "ert_tables.tsv");
    write_ert_tables(ert_out, tables);
    auto vbs_out = open_output(out_dir / "vbs_reports.tsv");
    write_vbs_reports(vbs_out, reports);
    auto cases_out = open_output(out_dir / "use_cases.tsv");
    write_use_cases(cases_out, cases);
    auto heat_t = open_output(out_dir / "heatmap_theoretical.tsv");
    write_heatmap(heat_t, heatmap_data(reports, GainKind::theoretical));
    auto heat_a = open_output(out_dir / "heatmap_actual.tsv");
    write_heatmap(heat_a, heatmap_data(reports, GainKind::actual));

    for (const auto& r : reports) {
        out << "F" << r.function_id << " d=" << r.dimension << ": static " << r.static_best << " ("
            << fmt(r.static_ert) << ")";
        if (r.is_switch()) {
            out << ", dyn " << switch_label(r.a1, r.a2, r.tau_index) << " (" << fmt(r.theoretical_ert)
                << ", gain " << fmt(relative_gain(r.static_ert, r.theoretical_ert)) << ")";
        } else {
            out << ", no switch helps";
        }
        out << '\n';
    }
    out << tables.size() << " ERT tables, " << reports.size() << " cells analyzed\n";
    return kExitOk;
}

int cmd_switch(const ExperimentSpec& spec, const std::optional<fs::path>& vbs_file,
               const std::vector<SwitchPlan>& plans, std::ostream& out, std::ostream& err) {
    spec.validate();
    struct Job {
        SwitchPlan plan;
        int function_id;
        int dimension;
        std::optional<VbsReport> report;
    };
    std::vector<Job> jobs;
    if (vbs_file) {
        std::ifstream in(*vbs_file);
        if (!in) throw ConfigError("cannot read " + vbs_file->string());
        for (const auto& r : read_vbs_reports(in)) {
            if (!r.is_switch()) continue;
            SwitchPlan plan;
            plan.a1 = config_for(spec, parse_algorithm(r.a1));
            plan.a2 = config_for(spec, parse_algorithm(r.a2));
            plan.tau = TargetGrid::target(r.tau_index);
            plan.phi = TargetGrid::target(r.phi_index);
            plan.policy = spec.settings.policy;
            plan.early_switch = spec.early_switch;
            jobs.push_back({plan, r.function_id, r.dimension, r});
        }
    } else {
        for (const auto& plan : plans) {
            for (int f : spec.functions) {
                for (int d : spec.dimensions) jobs.push_back({plan, f, d, std::nullopt});
            }
        }
    }
    if (jobs.empty()) {
        out << "no switching plans to execute\n";
        return kExitOk;
    }

    ensure_directory(spec.out / "logs");
    nlohmann::ordered_json details = spec_json(spec);
    details["vbs_file"] = vbs_file ? vbs_file->string() : std::string();
    details["policy"] = std::string(to_string(spec.settings.policy.mode));
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const auto& job : jobs) {
        cells.push_back({{"label", job.plan.label()}, {"function_id", job.function_id}, {"dimension", job.dimension}});
    }
    details["cells"] = cells;
    write_manifest(spec.out, "switch", details);

    std::vector<RunRecord> all;
    int failures = 0;
    auto report_out = open_output(spec.out / "switch_report.tsv");
    report_out << "function_id\tdimension\tlabel\tstatic_best\tstatic_ert\ttheoretical_ert\tactual_ert\tsuccesses"
                  "\truns\ttheoretical_gain\tactual_gain_vs_static\tactual_vs_theoretical\n";
    for (const auto& job : jobs) {
        BatchResult batch = switch_records(spec, job.plan, job.function_id, job.dimension, err);
        failures += batch.failures;
        double actual = std::numeric_limits<double>::infinity();
        int successes = 0;
        if (!batch.records.empty()) {
            std::vector<RunTrace> traces;
            for (const auto& r : batch.records) traces.push_back(r.trace);
            const ErtTable table = build_ert_table(traces);
            const int phi_index = TargetGrid::nearest_index(job.plan.phi);
            actual = table.ert[phi_index];
            successes = table.successes[phi_index];
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const double static_ert = job.report ? job.report->static_ert : nan;
        const double theoretical = job.report ? job.report->theoretical_ert : nan;
        const Gains g = job.report ? gains(static_ert, theoretical, actual) : Gains{nan, nan, nan};
        const std::string label = validated(job.plan).label();
        report_out << job.function_id << '\t' << job.dimension << '\t' << label << '\t'
                   << (job.report ? job.report->static_best : "-") << '\t' << fmt(static_ert) << '\t'
                   << fmt(theoretical) << '\t' << fmt(actual) << '\t' << successes << '\t' << batch.records.size()
                   << '\t' << fmt(g.theoretical_vs_static) << '\t' << fmt(g.actual_vs_static) << '\t'
                   << fmt(g.actual_vs_theoretical) << '\n';
        out << label << " F" << job.function_id << " d=" << job.dimension << ": actual ERT " << fmt(actual) << " ("
            << successes << '/' << batch.records.size() << ")";
        if (job.report) out << ", static " << fmt(static_ert) << ", gain " << fmt(g.actual_vs_static);
        out << '\n';
        std::move(batch.records.begin(), batch.records.end(), std::back_inserter(all));
    }
    auto log = open_output(spec.out / "logs" / "switch.jsonl");
    write_run_log(log, all);
    return failures > 0 ? kExitPartial : kExitOk;
}

int cmd_sweep_tau(const ExperimentSpec& spec, const SwitchPlan& plan, std::ostream& out, std::ostream& /*err*/) {
    spec.validate();
    if (spec.functions.size() != 1 || spec.dimensions.size() != 1) {
        throw ConfigError("sweep-tau needs exactly one function and one dimension");
    }
    const int f = spec.functions.front();
    const int d = spec.dimensions.front();
    SweepOptions options;
    options.instances = spec.instances;
    options.runs_per_instance = spec.runs;
    options.budget = spec.budget(d);
    options.seed = derive_seed(spec.seed, "sweep", f, d);
    options.suite_seed = spec.suite_seed;
    options.jobs = spec.jobs;

    ensure_directory(spec.out / "logs");
    nlohmann::ordered_json details = spec_json(spec);
    details["a1"] = std::string(to_string(plan.a1.algorithm));
    details["a2"] = std::string(to_string(plan.a2.algorithm));
    write_manifest(spec.out, "sweep-tau", details);

    const SweepResult result = sweep_tau(plan, f, d, default_tau_grid(plan.phi), options);

    auto rows = open_output(spec.out / "sweep_rows.tsv");
    rows << "tau_exponent\tinstance\trun\thitting_time\tevals_used\tswitch_eval\n";
    for (const auto& r : result.rows) {
        rows << fmt(std::log10(r.tau)) << '\t' << r.instance << '\t' << r.run << '\t'
             << (r.hitting_time ? std::to_string(*r.hitting_time) : "inf") << '\t' << r.evals_used << '\t'
             << (r.switch_eval ? std::to_string(*r.switch_eval) : "-") << '\n';
    }
    auto summary = open_output(spec.out / "sweep_summary.tsv");
    summary << "tau_exponent\truns\tsuccesses\tmean\tstddev\tert\n";
    for (const auto& s : result.summary) {
        const std::string exponent = fmt(TargetGrid::exponent(TargetGrid::nearest_index(s.tau)));
        summary << exponent << '\t' << s.runs << '\t' << s.successes << '\t' << fmt(s.mean) << '\t' << fmt(s.stddev)
                << '\t' << fmt(s.ert) << '\n';
        out << "tau 1e" << exponent << ": mean " << fmt(s.mean) << " std " << fmt(s.stddev) << " ("
            << s.successes << '/' << s.runs << ")\n";
    }
    auto log = open_output(spec.out / "logs" / "sweep.jsonl");
    write_run_log(log, result.records);
    return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Benchmarking harness for single-switch dynamic algorithm selection"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::vector<std::string> algorithm_names;
    std::string config_path;
    std::string warmstart_mode;
    bool quick = false;
    bool no_early_switch = false;
    double tau = 1e-4;
    std::string a1_name = "BFGS";
    std::string a2_name = "CMA-ES";
    std::string logs_dir;
    std::string from_analysis;
    std::string out_dir = "out";

    auto add_grid_flags = [&](CLI::App* cmd) {
        cmd->add_option("--functions", spec.functions, "Function ids")->delimiter(',');
        cmd->add_option("--dims", spec.dimensions, "Dimensions")->delimiter(',');
        cmd->add_option("--instances", spec.instances, "Instance ids")->delimiter(',');
        cmd->add_option("--runs", spec.runs, "Runs per instance");
        cmd->add_option("--budget-mult", spec.budget_multiplier, "Budget is this times the dimension");
        cmd->add_option("--seed", spec.seed, "Master seed");
        cmd->add_option("--suite-seed", spec.suite_seed, "Seed of the problem instances");
        cmd->add_option("--jobs", spec.jobs, "Worker threads");
        cmd->add_flag("--quick", quick, "3 runs on instances 1 and 2");
        cmd->add_option("--config", config_path, "JSON file with hyperparameter overrides");
    };
    auto add_switch_flags = [&](CLI::App* cmd) {
        cmd->add_option("--warmstart-mode", warmstart_mode, "point_only or full");
        cmd->add_flag("--no-early-switch", no_early_switch, "Do not switch when A1 converges above tau");
    };

    CLI::App* bench = app.add_subcommand("bench", "Run the static portfolio");
    add_grid_flags(bench);
    bench->add_option("--algorithms", algorithm_names, "Subset of BFGS,MLSL,PSO,CMA-ES,DE")->delimiter(',');
    bench->add_option("--phi", spec.phi, "Final target");
    bench->add_option("--out", out_dir, "Output directory");

    CLI::App* analyze = app.add_subcommand("analyze", "ERT tables, VBS reports, use cases and heatmaps");
    analyze->add_option("--logs", logs_dir, "Run-log file or directory")->required();
    analyze->add_option("--phi", spec.phi, "Final target");
    analyze->add_option("--out", out_dir, "Output directory");

    CLI::App* sw = app.add_subcommand("switch", "Execute switching plans");
    add_grid_flags(sw);
    add_switch_flags(sw);
    sw->add_option("--from-analysis", from_analysis, "Analysis directory (uses its vbs_reports.tsv)");
    sw->add_option("--a1", a1_name, "First algorithm");
    sw->add_option("--a2", a2_name, "Second algorithm");
    sw->add_option("--tau", tau, "Switching target");
    sw->add_option("--phi", spec.phi, "Final target");
    sw->add_option("--out", out_dir, "Output directory");

    CLI::App* sweep = app.add_subcommand("sweep-tau", "Sweep the switching point over the target grid");
    add_grid_flags(sweep);
    add_switch_flags(sweep);
    sweep->add_option("--a1", a1_name, "First algorithm");
    sweep->add_option("--a2", a2_name, "Second algorithm");
    sweep->add_option("--phi", spec.phi, "Final target");
    sweep->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!config_path.empty()) spec.settings = load_settings(config_path);
        if (!warmstart_mode.empty()) spec.settings.policy.mode = parse_warmstart_mode(warmstart_mode);
        spec.early_switch = !no_early_switch;
        if (quick) {
            spec.runs = 3;
            spec.instances = {1, 2};
        }
        spec.out = out_dir;

        auto make_plan = [&] {
            SwitchPlan plan;
            plan.a1 = config_for(spec, parse_algorithm(a1_name));
            plan.a2 = config_for(spec, parse_algorithm(a2_name));
            plan.tau = tau;
            plan.phi = spec.phi;
            plan.policy = spec.settings.policy;
            plan.early_switch = spec.early_switch;
            return validated(plan);
        };

        if (bench->parsed()) {
            if (!algorithm_names.empty()) {
                spec.algorithms.clear();
                for (const auto& name : algorithm_names) spec.algorithms.push_back(parse_algorithm(name));
            }
            return cmd_bench(spec, out, err);
        }
        if (analyze->parsed()) return cmd_analyze(logs_dir, out_dir, spec.phi, out, err);
        if (sw->parsed()) {
            if (!from_analysis.empty()) {
                fs::path file = from_analysis;
                if (fs::is_directory(file)) file /= "vbs_reports.tsv";
                if (!fs::exists(file)) throw ConfigError("analysis artifacts not found: " + file.string());
                return cmd_switch(spec, file, {}, out, err);
            }
            return cmd_switch(spec, std::nullopt, {make_plan()}, out, err);
        }
        if (sweep->parsed()) {
            tau = 1.0;  // the sweep covers every grid tau; this only has to pass validation
            return cmd_sweep_tau(spec, make_plan(), out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace dynas::cli
