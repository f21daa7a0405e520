#pragma once

#include "dynas/tracing.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dynas {

/// Extra fields of a single-switch run.
struct SwitchInfo {
    std::string a1;
    std::string a2;
    double tau = 0.0;
    std::optional<EvalCount> switch_eval;
    TerminationReason phase1_reason = TerminationReason::budget_exhausted;
    std::optional<TerminationReason> phase2_reason;
    EvalCount phase1_evals = 0;
    EvalCount phase2_evals = 0;
    /// The switch was triggered by A1 converging above tau.
    bool early_switch = false;

    bool operator==(const SwitchInfo&) const = default;
};

/// One line of a run log: a static run, or a switch run with its extra fields.
struct RunRecord {
    RunTrace trace;
    std::optional<SwitchInfo> switching;

    bool operator==(const RunRecord&) const = default;
};

/// Single-line JSON object (no trailing newline). Keys are emitted in a fixed
/// order so identical records serialize to identical bytes.
std::string to_log_line(const RunRecord& record);
/// Throws UsageError on malformed input.
RunRecord parse_log_line(std::string_view line);

void write_run_log(std::ostream& out, std::span<const RunRecord> records);

struct RunLog {
    std::vector<RunRecord> records;
    int malformed_lines = 0;
};

/// Reads one file, or every *.jsonl file of a directory in name order.
/// Malformed lines are skipped and counted.
RunLog read_run_log(std::istream& in);
RunLog read_run_logs(const std::filesystem::path& file_or_directory);

}  // namespace dynas
