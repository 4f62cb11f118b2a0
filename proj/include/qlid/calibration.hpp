#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlid/decision.hpp"
#include "qlid/inference.hpp"
#include "qlid/network.hpp"

namespace qlid {

inline constexpr std::size_t kDefaultFitGrid = 1'000'000;

// All phases in [0, 2*pi) at which the queried outcome's probability equals
// the target, found by a dense grid scan plus bisection refinement.
// Solutions are sorted ascending and come in mirror pairs (theta, 2*pi -
// theta) because the probability depends on the phase through cos alone.
struct ThetaFitResult {
    std::vector<double> solutions;
    std::vector<double> residuals;   // |probability(solution) - target| per solution
    double grid_resolution = 0.0;    // 2*pi / grid points
    double attainable_min = 0.0;     // probability envelope observed over the grid
    double attainable_max = 0.0;
};

// One sample of a phase sweep. A missing value marks a phase at which the
// query was degenerate (every outcome scored zero).
struct SweepSample {
    double theta = 0.0;
    std::optional<double> value;
};

struct SweepCurve {
    std::string quantity;  // "probability" or "expected_utility"
    std::string query;     // probability sweeps: query variable and outcome
    std::string outcome;
    std::string context;   // expected-utility sweeps: context and action
    std::string action;
    std::vector<SweepSample> samples;
};

struct ThetaInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Per-context slice of an expected-utility sweep: one curve per action plus
// the phase intervals on which the second declared action strictly beats the
// first (for the built-in experiments: cooperate over defect).
struct ContextEuSweep {
    std::string context;
    std::vector<SweepCurve> curves;
    std::vector<ThetaInterval> dominance;
};

struct EuSweepResult {
    std::vector<std::string> actions;
    std::vector<ContextEuSweep> contexts;
};

// Finds every phase difference reproducing `target_probability` for
// `target_outcome`. Requires a two-configuration query (a single phase
// difference parameter). Scans `grid_points` uniform samples of [0, 2*pi),
// then refines each sign change by bisection until the bracket collapses.
// Throws NoSolutionError (carrying the attainable envelope) when the target
// is outside the reachable range.
ThetaFitResult fit_theta(const AmplitudeNetwork& net, std::string_view query,
                         const Evidence& evidence, std::string_view target_outcome,
                         double target_probability, std::size_t grid_points = kDefaultFitGrid);

// Probability of `outcome` sampled at `steps` uniform phases over [0, 2*pi),
// each sample a full inference. Degenerate phases become gap samples.
SweepCurve sweep_probability(const AmplitudeNetwork& net, std::string_view query,
                             const Evidence& evidence, std::string_view outcome,
                             std::size_t steps);

// Expected utility of every (context, action) cell sampled over the phase
// grid, with dominance intervals extracted per context from the sign changes
// of the utility difference and their endpoints refined by bisection.
// Requires exactly two actions.
EuSweepResult sweep_expected_utility(const DecisionProblem& problem, std::size_t steps);

}  // namespace qlid
