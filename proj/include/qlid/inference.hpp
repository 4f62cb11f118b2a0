#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qlid/network.hpp"

namespace qlid {

// One phase per joint configuration of the unobserved variables.
// Configuration k enumerates the unobserved variables in network declaration
// order, outcomes in declared order, first variable most significant (so the
// last unobserved variable cycles fastest). Phases are canonicalized on
// construction.
class PhaseAssignment {
public:
    PhaseAssignment() = default;
    explicit PhaseAssignment(std::vector<double> phases);

    // Two-configuration convenience: the scalar is the phase difference
    // (theta_1 - theta_2), expanded internally to {theta, 0}.
    static PhaseAssignment from_difference(double theta);

    std::size_t size() const { return phases_.size(); }
    double operator[](std::size_t k) const { return phases_[k]; }
    const std::vector<double>& phases() const { return phases_; }

private:
    std::vector<double> phases_;
};

// Decomposition of one query outcome's score before normalization:
//   classical_part     sum over configurations of squared path magnitudes
//   interference_part  2 * sum over configuration pairs of the cosine cross terms
//   unnormalized       their sum, clamped to 0 when within rounding below 0
struct OutcomeScore {
    double classical_part = 0.0;
    double interference_part = 0.0;
    double unnormalized = 0.0;
};

class InferenceResult {
public:
    InferenceResult(std::vector<std::string> outcomes, std::vector<OutcomeScore> scores,
                    double gamma, std::vector<double> normalized);

    const std::vector<std::string>& outcomes() const { return outcomes_; }
    const std::vector<OutcomeScore>& scores() const { return scores_; }
    const OutcomeScore& score(std::string_view outcome) const;
    double gamma() const { return gamma_; }
    const std::vector<double>& normalized() const { return normalized_; }
    double probability(std::string_view outcome) const;

private:
    std::vector<std::string> outcomes_;
    std::vector<OutcomeScore> scores_;
    double gamma_ = 0.0;
    std::vector<double> normalized_;
};

// Number of joint configurations of the unobserved variables for a query,
// i.e. the required PhaseAssignment length.
std::size_t configuration_count(const AmplitudeNetwork& net, std::string_view query,
                                const Evidence& evidence);

// Joint amplitude of a full assignment: the product over all variables of
// the CPT entries the assignment selects.
Amplitude joint_amplitude(const AmplitudeNetwork& net,
                          const std::map<std::string, std::string>& full_assignment);

// Exact inference with interference. For each query outcome the paths over
// unobserved configurations are combined as
//   |path_k| from the CPT magnitudes,
//   effective phase of path k = phases[k] + accumulated CPT phase,
// yielding classical + interference parts, then normalized by gamma.
// Throws DegenerateQueryError when every outcome scores zero.
InferenceResult infer(const AmplitudeNetwork& net, std::string_view query,
                      const Evidence& evidence, const PhaseAssignment& phases);

// Two-configuration convenience overload (single phase difference).
InferenceResult infer(const AmplitudeNetwork& net, std::string_view query,
                      const Evidence& evidence, double theta_difference);

// Classical counterpart: every interference cross term is dropped, scores
// are plain sums of squared path magnitudes.
InferenceResult infer_classical(const AmplitudeNetwork& net, std::string_view query,
                                const Evidence& evidence);

// Brute-force reference: walks the full joint table, accumulates each path
// as a rectangular complex number (rotated by its configuration phase), sums
// before squaring, then normalizes. Same contract as infer; exists for
// equivalence testing. Guarded to networks with at most 2^20 joint states.
InferenceResult enumerate_joint_oracle(const AmplitudeNetwork& net, std::string_view query,
                                       const Evidence& evidence, const PhaseAssignment& phases);
InferenceResult enumerate_joint_oracle(const AmplitudeNetwork& net, std::string_view query,
                                       const Evidence& evidence, double theta_difference);

namespace detail {

// Resolved query geometry shared by the inference routines and calibration.
struct QueryLayout {
    std::size_t query = 0;                         // query variable index
    std::vector<std::size_t> unobserved;           // declaration order
    std::vector<std::size_t> base_assignment;      // evidence outcomes filled in
    std::size_t config_count = 1;
};

QueryLayout make_layout(const AmplitudeNetwork& net, std::string_view query,
                        const Evidence& evidence);

// Per query outcome: magnitude and accumulated CPT phase of every
// configuration path, in configuration order.
struct OutcomePaths {
    std::vector<double> magnitudes;
    std::vector<double> cpt_phases;
};

std::vector<OutcomePaths> enumerate_paths(const AmplitudeNetwork& net, const QueryLayout& layout);

// Combine enumerated paths with a phase assignment into per-outcome scores
// (the polar-form cosine expansion used by infer).
std::vector<OutcomeScore> score_outcomes(const std::vector<OutcomePaths>& paths,
                                         const PhaseAssignment& phases);

// Allocation-free variant for tight scan loops; `phases` must hold one entry
// per configuration.
void score_outcomes_into(const std::vector<OutcomePaths>& paths, const double* phases,
                         std::vector<OutcomeScore>& out);

// Normalization step shared by all inference routines; throws
// DegenerateQueryError when no outcome scores above zero.
InferenceResult normalize(const AmplitudeNetwork& net, const QueryLayout& layout,
                          std::vector<OutcomeScore> scores);

}  // namespace detail

}  // namespace qlid
