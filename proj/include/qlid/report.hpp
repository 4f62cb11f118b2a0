#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlid/calibration.hpp"
#include "qlid/experiment.hpp"

namespace qlid {

// One reproduced quantity. Numeric comparisons fill paper_value /
// computed_value / delta; decision comparisons fill the label pair instead.
// Rows without a published target leave paper fields, tolerance and pass
// empty. pass is also left empty for the two published cells that are
// tabulated but excluded from assessment (see README).
struct ReportRow {
    std::string experiment;
    std::string quantity;
    std::optional<double> paper_value;
    std::optional<double> computed_value;
    std::string paper_label;
    std::string computed_label;
    std::optional<double> delta;
    std::optional<double> tolerance;
    std::optional<bool> pass;
};

struct RunReport {
    std::vector<ReportRow> rows;

    const ReportRow* find(std::string_view experiment, std::string_view quantity) const;
};

struct ReproduceOptions {
    std::size_t fit_grid = kDefaultFitGrid;
    bool parallel = false;
};

// Reproduces every derived quantity of every record and tabulates the deltas
// against the published values: classical and phase-adjusted unknown-condition
// probabilities, the refitted phase, the classical and interference-adjusted
// MEU tables, the chosen actions, and the interference sign. Published MEU
// targets exist for the built-in corpus only; custom records get computed
// values without targets. Output is deterministic: byte-identical CSV across
// runs on the same input.
RunReport reproduce(const std::vector<ExperimentRecord>& dataset,
                    const ReproduceOptions& options = {});

// Locale-free formatting with 6 significant digits, used by every CSV writer.
std::string format_number(double value);

// CSV writers. Headers are fixed:
//   report:      experiment,quantity,paper_value,computed,delta,tolerance,pass
//   probability: theta,probability
//   eu sweep:    theta,context,eu_action_<a1>,eu_action_<a2>
// The dominance sidecar of an EU sweep lists context,theta_start,theta_end.
void write_report_csv(const RunReport& report, const std::filesystem::path& path);
void write_curve_csv(const SweepCurve& curve, const std::filesystem::path& path);
void write_eu_sweep_csv(const EuSweepResult& sweep, const std::filesystem::path& path,
                        const std::filesystem::path& dominance_path);

}  // namespace qlid
