#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlid/decision.hpp"
#include "qlid/network.hpp"

namespace qlid {

// Variable, outcome and action labels shared by every Prisoner's Dilemma
// experiment model.
namespace pd {
inline constexpr std::string_view kChanceVariable = "opponent_move";
inline constexpr std::string_view kContextVariable = "risk_preference";
inline constexpr std::string_view kDefect = "defect";
inline constexpr std::string_view kCooperate = "cooperate";
inline constexpr std::string_view kRiskAverse = "risk_averse";
inline constexpr std::string_view kRiskSeeking = "risk_seeking";
}  // namespace pd

// Player-2 payoffs keyed by the joint move: first letter the opponent's
// move, second the player's own action (d = defect, c = cooperate).
struct Payoffs {
    double dd = 0.0;
    double dc = 0.0;
    double cd = 0.0;
    double cc = 0.0;
};

// One published Prisoner's Dilemma experiment: the observed defect
// probabilities under the three disclosure conditions, the published phase
// parameter when one was reported, and the payoff matrix.
struct ExperimentRecord {
    std::string name;
    double p_known_defect = 0.0;      // P(defect | opponent known to defect)
    double p_known_cooperate = 0.0;   // P(defect | opponent known to cooperate)
    double p_unknown_observed = 0.0;  // P(defect) observed with the move undisclosed
    double p_classical = 0.0;         // published classical prediction for the unknown condition
    std::optional<double> theta;      // published interference phase, radians
    Payoffs payoffs;
    bool stp_violation = false;  // experiment reported a Sure Thing Principle violation

    // Field-by-field validation: probabilities in range, payoffs finite, and
    // p_classical consistent with neutral priors within 5e-4.
    void validate() const;
};

// Published expected-utility reference values for a built-in experiment,
// indexed [context][action] with contexts (risk_averse, risk_seeking) and
// actions (defect, cooperate).
struct PublishedMeu {
    double classical[2][2];
    double quantum[2][2];
};

// The eight built-in experiments (one classic study plus seven game
// variants), hard-coded exactly as published.
const std::vector<ExperimentRecord>& builtin_corpus();

// Reference MEU cells for a built-in experiment; null for unknown names.
const PublishedMeu* published_meu(std::string_view name);

// Two-variable network for a record: neutral priors on the opponent's move,
// risk-preference amplitudes sqrt(p) with phase 0.
AmplitudeNetwork build_network(const ExperimentRecord& record);

// Full influence diagram: the network plus the payoff table over
// (opponent move, action).
DecisionProblem build_problem(const ExperimentRecord& record);

struct LoadedSpec {
    ExperimentRecord record;
    DecisionProblem problem;
};

// Parses and validates an experiment spec file (the flat key = value format
// documented in the README), then builds the decision problem from it.
// Parse failures carry file/line diagnostics.
LoadedSpec load_spec(const std::filesystem::path& path);

// Raw parse + validation without constructing the problem.
ExperimentRecord parse_spec(const std::filesystem::path& path);

// Writes a record in the spec format with round-trip-exact numbers.
void write_spec(const ExperimentRecord& record, const std::filesystem::path& path);

}  // namespace qlid
