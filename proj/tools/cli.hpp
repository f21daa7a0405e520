#pragma once

#include "dynas/analysis.hpp"
#include "dynas/config.hpp"
#include "dynas/optimizer.hpp"
#include "dynas/run_log.hpp"
#include "dynas/switching.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace dynas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

struct ExperimentSpec {
    std::vector<Algorithm> algorithms{kPortfolio.begin(), kPortfolio.end()};
    std::vector<int> functions{kImplementedFunctions.begin(), kImplementedFunctions.end()};
    std::vector<int> dimensions{kSuiteDimensions.begin(), kSuiteDimensions.end()};
    std::vector<int> instances{1, 2, 3, 4, 5};
    int runs = 5;
    EvalCount budget_multiplier = 10000;
    double phi = 1e-8;
    std::uint64_t seed = 0;
    std::uint64_t suite_seed = 0;
    int jobs = 1;
    bool early_switch = true;
    HarnessSettings settings;
    std::filesystem::path out = "out";

    /// Throws ConfigError.
    void validate() const;
    EvalCount budget(int dimension) const { return budget_multiplier * dimension; }
};

/// seed_cell = hash(master, label, f, d, instance, run).
std::uint64_t cell_seed(std::uint64_t master, std::string_view label, const ProblemId& id, int run);

struct BatchResult {
    std::vector<RunRecord> records;
    int failures = 0;
};

/// Runs the static portfolio grid. Records are ordered by (algorithm, function,
/// dimension, instance, run) regardless of --jobs.
BatchResult bench_records(const ExperimentSpec& spec, std::ostream& err);

/// Runs `plan` on every (instance, run) of one cell. Seeds are derived from
/// the plan label, so different plans see independent runs.
BatchResult switch_records(const ExperimentSpec& spec, const SwitchPlan& plan, int function_id, int dimension,
                           std::ostream& err);

int cmd_bench(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);
int cmd_analyze(const std::filesystem::path& logs, const std::filesystem::path& out_dir, double phi,
                std::ostream& out, std::ostream& err);
/// Executes every switching VBS_dyn of `vbs_file`, or `plans` when no file is given.
int cmd_switch(const ExperimentSpec& spec, const std::optional<std::filesystem::path>& vbs_file,
               const std::vector<SwitchPlan>& plans, std::ostream& out, std::ostream& err);
int cmd_sweep_tau(const ExperimentSpec& spec, const SwitchPlan& plan, std::ostream& out, std::ostream& err);

/// Parses arguments and dispatches; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dynas::cli
