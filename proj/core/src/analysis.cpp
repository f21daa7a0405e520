#include "dynas/analysis.hpp"

#include "dynas/problems.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace dynas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

double parse_real(const std::string& text) {
    if (text == "inf") return kInf;
    if (text == "-inf") return -kInf;
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw UsageError("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + text + "'");
    }
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

void check_indices(int tau_index, int phi_index) {
    if (phi_index < 1 || phi_index >= TargetGrid::size || tau_index < 0 || tau_index > phi_index) {
        throw UsageError("need 0 <= tau_index <= phi_index < 51");
    }
}

std::string_view flag_name(HeatFlag flag) {
    switch (flag) {
        case HeatFlag::ok: return "ok";
        case HeatFlag::negative: return "negative";
        case HeatFlag::infinite: return "X";
        case HeatFlag::absent: return "absent";
    }
    return "absent";
}

}  // namespace

double ert(std::span<const RunOutcome> runs, EvalCount budget) {
    if (runs.empty()) throw UsageError("ert: empty run list");
    EvalCount total = 0;
    EvalCount successes = 0;
    for (const auto& r : runs) {
        if (r.consumed < 0 || r.consumed > budget) throw UsageError("ert: run consumed more than the budget");
        if (r.hitting_time) {
            total += std::min(*r.hitting_time, r.consumed);
            ++successes;
        } else {
            total += r.consumed;
        }
    }
    if (successes == 0) return kInf;
    return static_cast<double>(total) / static_cast<double>(successes);
}

ErtTable build_ert_table(std::span<const RunTrace> traces) {
    if (traces.empty()) throw UsageError("build_ert_table: no traces");
    ErtTable table;
    table.algorithm_label = traces.front().algorithm_label;
    table.function_id = traces.front().problem.function_id;
    table.dimension = traces.front().problem.dimension;
    table.runs = static_cast<int>(traces.size());

    EvalCount budget = 0;
    for (const auto& t : traces) {
        budget = std::max(budget, t.budget);
        if (t.terminated_reason == TerminationReason::algorithm_converged) ++table.early_unsuccessful;
    }
    std::vector<RunOutcome> outcomes(traces.size());
    for (int k = 0; k < TargetGrid::size; ++k) {
        int successes = 0;
        for (std::size_t i = 0; i < traces.size(); ++i) {
            outcomes[i] = {traces[i].hit_at[k], traces[i].evals_used};
            if (traces[i].hit_at[k]) ++successes;
        }
        table.ert[k] = ert(outcomes, budget);
        table.successes[k] = successes;
    }
    return table;
}

std::vector<ErtTable> build_ert_tables(std::span<const RunRecord> records) {
    std::map<std::tuple<std::string, int, int>, std::vector<RunTrace>> groups;
    for (const auto& r : records) {
        const auto& t = r.trace;
        groups[{t.algorithm_label, t.problem.function_id, t.problem.dimension}].push_back(t);
    }
    std::vector<ErtTable> tables;
    tables.reserve(groups.size());
    for (const auto& [key, traces] : groups) tables.push_back(build_ert_table(traces));
    return tables;
}

double theoretical_performance(const ErtCurve& a1, const ErtCurve& a2, int tau_index, int phi_index) {
    check_indices(tau_index, phi_index);
    const double first = a1[tau_index];
    if (std::isinf(first) || std::isinf(a2[phi_index])) return kInf;
    const double value = first + (a2[phi_index] - a2[tau_index]);
    return std::isnan(value) ? first : std::max(first, value);
}

TauChoice best_tau(const ErtCurve& a1, const ErtCurve& a2, int phi_index) {
    if (phi_index < 1 || phi_index >= TargetGrid::size) throw UsageError("best_tau: empty tau grid");
    TauChoice best{0, theoretical_performance(a1, a2, 0, phi_index)};
    for (int k = 1; k < phi_index; ++k) {
        const double v = theoretical_performance(a1, a2, k, phi_index);
        if (v < best.value) best = {k, v};
    }
    return best;
}

VbsReport vbs_dyn(std::span<const ErtTable> tables, int phi_index) {
    if (tables.empty()) throw UsageError("vbs_dyn: no tables");
    if (phi_index < 1 || phi_index >= TargetGrid::size) throw UsageError("vbs_dyn: phi must be below the top target");
    std::vector<const ErtTable*> sorted;
    for (const auto& t : tables) {
        if (t.function_id != tables.front().function_id || t.dimension != tables.front().dimension) {
            throw UsageError("vbs_dyn: tables from different (function, dimension) cells");
        }
        sorted.push_back(&t);
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ErtTable* a, const ErtTable* b) { return a->algorithm_label < b->algorithm_label; });

    VbsReport report;
    report.function_id = tables.front().function_id;
    report.dimension = tables.front().dimension;
    report.phi_index = phi_index;

    const ErtTable* incumbent = sorted.front();
    for (const ErtTable* t : sorted) {
        if (t->ert[phi_index] < incumbent->ert[phi_index]) incumbent = t;
    }
    report.static_best = incumbent->algorithm_label;
    report.static_ert = incumbent->ert[phi_index];
    report.a1 = report.a2 = report.static_best;
    report.tau_index = 0;
    report.theoretical_ert = report.static_ert;

    // Identity pairs telescope to ERT(A, phi) >= static_ert, so the incumbent
    // already stands for all of them exactly.
    for (const ErtTable* first : sorted) {
        for (const ErtTable* second : sorted) {
            if (first == second) continue;
            const TauChoice choice = best_tau(first->ert, second->ert, phi_index);
            if (choice.value < report.theoretical_ert) {
                report.a1 = first->algorithm_label;
                report.a2 = second->algorithm_label;
                report.tau_index = choice.tau_index;
                report.theoretical_ert = choice.value;
            }
        }
    }
    return report;
}

std::vector<VbsReport> vbs_reports(std::span<const ErtTable> tables, int phi_index) {
    std::map<std::pair<int, int>, std::vector<ErtTable>> cells;
    for (const auto& t : tables) {
        // Switch runs carry "A1>A2@tau" labels and are not portfolio members.
        if (t.algorithm_label.find('>') != std::string::npos) continue;
        cells[{t.function_id, t.dimension}].push_back(t);
    }
    std::vector<VbsReport> reports;
    for (const auto& [cell, group] : cells) reports.push_back(vbs_dyn(group, phi_index));
    return reports;
}

double relative_gain(double reference, double value) {
    if (!std::isfinite(reference)) return std::numeric_limits<double>::quiet_NaN();
    if (!std::isfinite(value)) return -kInf;
    return (reference - value) / reference;
}

Gains gains(double static_ert, double theoretical_ert, double actual_ert) {
    return {relative_gain(static_ert, theoretical_ert), relative_gain(static_ert, actual_ert),
            relative_gain(theoretical_ert, actual_ert)};
}

std::vector<HeatCell> heatmap_data(std::span<const VbsReport> reports, GainKind kind) {
    std::vector<HeatCell> cells;
    for (const auto& r : reports) {
        HeatCell cell;
        cell.function_id = r.function_id;
        cell.dimension = r.dimension;
        cell.value = std::numeric_limits<double>::quiet_NaN();
        const bool has_value = kind == GainKind::theoretical || r.actual_ert.has_value();
        if (!r.is_switch() || !has_value) {
            cell.flag = HeatFlag::absent;
            cells.push_back(cell);
            continue;
        }
        const double ert_value = kind == GainKind::theoretical ? r.theoretical_ert : *r.actual_ert;
        const double gain = relative_gain(r.static_ert, ert_value);
        if (!std::isfinite(gain)) {
            cell.flag = HeatFlag::infinite;
            cell.value = 0.0;
        } else if (gain < 0.0) {
            cell.flag = HeatFlag::negative;
            cell.value = 0.0;
        } else {
            cell.flag = HeatFlag::ok;
            cell.value = gain;
        }
        cells.push_back(cell);
    }
    return cells;
}

std::vector<UseCase> use_case_table(std::span<const VbsReport> reports) {
    std::map<std::pair<std::string, std::string>, std::vector<std::pair<int, int>>> pairs;
    for (const auto& r : reports) {
        if (!r.is_switch()) continue;
        pairs[{r.a1, r.a2}].emplace_back(r.function_id, r.dimension);
    }
    std::vector<UseCase> cases;
    for (auto& [key, cells] : pairs) {
        std::sort(cells.begin(), cells.end());
        cases.push_back({key.first, key.second, std::move(cells)});
    }
    return cases;
}

void write_ert_tables(std::ostream& out, std::span<const ErtTable> tables) {
    out << "algorithm_label\tfunction_id\tdimension\ttarget_exponent\tert\tsuccesses\truns\n";
    for (const auto& t : tables) {
        for (int k = 0; k < TargetGrid::size; ++k) {
            out << t.algorithm_label << '\t' << t.function_id << '\t' << t.dimension << '\t'
                << format_real(TargetGrid::exponent(k)) << '\t' << format_real(t.ert[k]) << '\t' << t.successes[k]
                << '\t' << t.runs << '\n';
        }
    }
}

void write_vbs_reports(std::ostream& out, std::span<const VbsReport> reports) {
    out << "function_id\tdimension\tphi_exponent\tstatic_best\tstatic_ert\ta1\ta2\ttau_exponent\ttheoretical_ert"
           "\ttheoretical_gain\tactual_ert\tactual_gain_vs_static\tactual_vs_theoretical\n";
    for (const auto& r : reports) {
        out << r.function_id << '\t' << r.dimension << '\t' << format_real(TargetGrid::exponent(r.phi_index)) << '\t'
            << r.static_best << '\t' << format_real(r.static_ert) << '\t' << r.a1 << '\t' << r.a2 << '\t'
            << format_real(TargetGrid::exponent(r.tau_index)) << '\t' << format_real(r.theoretical_ert) << '\t'
            << format_real(relative_gain(r.static_ert, r.theoretical_ert));
        if (r.actual_ert) {
            const Gains g = gains(r.static_ert, r.theoretical_ert, *r.actual_ert);
            out << '\t' << format_real(*r.actual_ert) << '\t' << format_real(g.actual_vs_static) << '\t'
                << format_real(g.actual_vs_theoretical);
        } else {
            out << "\t-\t-\t-";
        }
        out << '\n';
    }
}

std::vector<VbsReport> read_vbs_reports(std::istream& in) {
    std::vector<VbsReport> reports;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() < 10) throw UsageError("VBS report line has too few columns: " + line);
        VbsReport r;
        r.function_id = std::stoi(f[0]);
        r.dimension = std::stoi(f[1]);
        r.phi_index = TargetGrid::index_of_exponent(parse_real(f[2]));
        r.static_best = f[3];
        r.static_ert = parse_real(f[4]);
        r.a1 = f[5];
        r.a2 = f[6];
        r.tau_index = TargetGrid::index_of_exponent(parse_real(f[7]));
        r.theoretical_ert = parse_real(f[8]);
        if (f.size() > 10 && f[10] != "-") r.actual_ert = parse_real(f[10]);
        reports.push_back(std::move(r));
    }
    return reports;
}

void write_use_cases(std::ostream& out, std::span<const UseCase> cases) {
    out << "a1\ta2\tcount\tcells\n";
    for (const auto& c : cases) {
        out << c.a1 << '\t' << c.a2 << '\t' << c.count() << '\t';
        for (std::size_t i = 0; i < c.cells.size(); ++i) {
            if (i) out << ',';
            out << 'F' << c.cells[i].first << '/' << c.cells[i].second << 'D';
        }
        out << '\n';
    }
}

void write_heatmap(std::ostream& out, std::span<const HeatCell> cells) {
    out << "function_id\tdimension\tgain\tflag\n";
    for (const auto& c : cells) {
        out << c.function_id << '\t' << c.dimension << '\t' << format_real(c.value) << '\t' << flag_name(c.flag)
            << '\n';
    }
}

}  // namespace dynas
