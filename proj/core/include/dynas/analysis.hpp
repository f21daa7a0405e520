#pragma once

#include "dynas/run_log.hpp"
#include "dynas/tracing.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dynas {

struct RunOutcome {
    /// Absent means the target was never reached.
    std::optional<EvalCount> hitting_time;
    /// Evaluations the run actually consumed.
    EvalCount consumed = 0;
};

/// Expected running time: sum of min(T_i, consumed_i) over all runs divided by
/// the number of successes; infinity without successes. Throws UsageError on
/// an empty list or when a run consumed more than `budget`.
double ert(std::span<const RunOutcome> runs, EvalCount budget);

using ErtCurve = std::array<double, TargetGrid::size>;

struct ErtTable {
    std::string algorithm_label;
    int function_id = 0;
    int dimension = 0;
    int runs = 0;
    /// Runs that stopped on their own before using the budget without success.
    int early_unsuccessful = 0;
    ErtCurve ert{};
    std::array<int, TargetGrid::size> successes{};
};

/// ERT for every grid target from the traces of one (label, function, dimension).
ErtTable build_ert_table(std::span<const RunTrace> traces);
/// Groups records by (label, function, dimension), sorted by that key.
std::vector<ErtTable> build_ert_tables(std::span<const RunRecord> records);

/// ERT(A1, tau) + ERT(A2, phi) - ERT(A2, tau), floored at ERT(A1, tau);
/// infinite when ERT(A1, tau) or ERT(A2, phi) is. Indices are grid indices and
/// must satisfy tau_index < phi_index.
double theoretical_performance(const ErtCurve& a1, const ErtCurve& a2, int tau_index, int phi_index);

struct TauChoice {
    int tau_index = 0;
    double value = 0.0;
};

/// Minimizes theoretical_performance over grid indices [0, phi_index); ties go
/// to the larger tau. Throws UsageError when phi_index is 0.
TauChoice best_tau(const ErtCurve& a1, const ErtCurve& a2, int phi_index);

struct VbsReport {
    int function_id = 0;
    int dimension = 0;
    int phi_index = TargetGrid::size - 1;
    std::string static_best;
    double static_ert = 0.0;
    std::string a1;
    std::string a2;
    int tau_index = 0;
    double theoretical_ert = 0.0;
    std::optional<double> actual_ert;

    bool is_switch() const { return a1 != a2; }
};

/// Exhaustive search over ordered pairs (identity included) and tau for one
/// (function, dimension). The static best is the incumbent and is only
/// replaced by a strictly smaller value. Throws UsageError on no tables or
/// tables of mixed cells.
VbsReport vbs_dyn(std::span<const ErtTable> tables, int phi_index);

/// One report per (function, dimension) present in `tables`.
std::vector<VbsReport> vbs_reports(std::span<const ErtTable> tables, int phi_index);

struct Gains {
    double theoretical_vs_static = 0.0;
    double actual_vs_static = 0.0;
    double actual_vs_theoretical = 0.0;
};

/// (reference - value) / reference for the three pairings. An infinite value
/// gives -infinity; an infinite reference gives NaN.
Gains gains(double static_ert, double theoretical_ert, double actual_ert);

/// (reference - value) / reference with the same infinity rules.
double relative_gain(double reference, double value);

enum class HeatFlag { ok, negative, infinite, absent };

struct HeatCell {
    int function_id = 0;
    int dimension = 0;
    /// Gain capped below at 0; NaN when absent.
    double value = 0.0;
    HeatFlag flag = HeatFlag::absent;
};

enum class GainKind { theoretical, actual };

/// One cell per report. Reports whose VBS_dyn is an identity pair, or that
/// lack the requested ERT, are absent.
std::vector<HeatCell> heatmap_data(std::span<const VbsReport> reports, GainKind kind);

struct UseCase {
    std::string a1;
    std::string a2;
    std::vector<std::pair<int, int>> cells;  // (function, dimension)

    std::size_t count() const { return cells.size(); }
};

/// Switching pairs that win at least one cell, sorted by (a1, a2).
std::vector<UseCase> use_case_table(std::span<const VbsReport> reports);

// Tab-separated writers; infinity is written as "inf".
void write_ert_tables(std::ostream& out, std::span<const ErtTable> tables);
void write_vbs_reports(std::ostream& out, std::span<const VbsReport> reports);
std::vector<VbsReport> read_vbs_reports(std::istream& in);
void write_use_cases(std::ostream& out, std::span<const UseCase> cases);
void write_heatmap(std::ostream& out, std::span<const HeatCell> cells);

}  // namespace dynas
