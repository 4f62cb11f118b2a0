#include "qlid/inference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qlid/errors.hpp"

namespace qlid {

namespace {
// Scores in [-kNegativeScoreSlack, 0) are rounding noise from the cosine
// expansion of a true squared modulus and clamp to zero; anything lower
// would mean the score is not a squared modulus at all, which per-path
// phases cannot produce.
constexpr double kNegativeScoreSlack = 1e-12;
}  // namespace

PhaseAssignment::PhaseAssignment(std::vector<double> phases) : phases_(std::move(phases)) {
    for (double& p : phases_) {
        p = canonical_phase(p);
    }
}

PhaseAssignment PhaseAssignment::from_difference(double theta) {
    return PhaseAssignment({theta, 0.0});
}

InferenceResult::InferenceResult(std::vector<std::string> outcomes,
                                 std::vector<OutcomeScore> scores, double gamma,
                                 std::vector<double> normalized)
    : outcomes_(std::move(outcomes)),
      scores_(std::move(scores)),
      gamma_(gamma),
      normalized_(std::move(normalized)) {}

const OutcomeScore& InferenceResult::score(std::string_view outcome) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i] == outcome) {
            return scores_[i];
        }
    }
    throw ValidationError("inference result has no outcome '" + std::string(outcome) + "'");
}

double InferenceResult::probability(std::string_view outcome) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i] == outcome) {
            return normalized_[i];
        }
    }
    throw ValidationError("inference result has no outcome '" + std::string(outcome) + "'");
}

namespace detail {

QueryLayout make_layout(const AmplitudeNetwork& net, std::string_view query,
                        const Evidence& evidence) {
    QueryLayout layout;
    layout.query = net.index_of(query);
    layout.base_assignment.assign(net.size(), 0);

    std::vector<bool> fixed(net.size(), false);
    for (const auto& [name, outcome] : evidence.assignments()) {
        std::size_t v = net.index_of(name);
        if (v == layout.query) {
            throw ValidationError("evidence assigns the query variable '" + std::string(query) +
                                  "'");
        }
        layout.base_assignment[v] = net.variable(v).outcome_index(outcome);
        fixed[v] = true;
    }
    for (std::size_t v = 0; v < net.size(); ++v) {
        if (v != layout.query && !fixed[v]) {
            layout.unobserved.push_back(v);
            layout.config_count *= net.variable(v).arity();
        }
    }
    return layout;
}

std::vector<OutcomePaths> enumerate_paths(const AmplitudeNetwork& net, const QueryLayout& layout) {
    const Variable& query_var = net.variable(layout.query);
    std::vector<OutcomePaths> paths(query_var.arity());
    for (auto& p : paths) {
        p.magnitudes.assign(layout.config_count, 0.0);
        p.cpt_phases.assign(layout.config_count, 0.0);
    }

    std::vector<std::size_t> assignment = layout.base_assignment;
    for (std::size_t k = 0; k < layout.config_count; ++k) {
        // decode configuration k: first unobserved variable most significant
        std::size_t rest = k;
        for (std::size_t i = layout.unobserved.size(); i-- > 0;) {
            std::size_t v = layout.unobserved[i];
            std::size_t arity = net.variable(v).arity();
            assignment[v] = rest % arity;
            rest /= arity;
        }
        for (std::size_t x = 0; x < query_var.arity(); ++x) {
            assignment[layout.query] = x;
            double magnitude = 1.0;
            double phase = 0.0;
            for (std::size_t v = 0; v < net.size(); ++v) {
                const Amplitude& a = net.amplitude(v, assignment);
                magnitude *= a.magnitude();
                phase += a.phase();
            }
            paths[x].magnitudes[k] = magnitude;
            paths[x].cpt_phases[k] = phase;
        }
    }
    return paths;
}

std::vector<OutcomeScore> score_outcomes(const std::vector<OutcomePaths>& paths,
                                         const PhaseAssignment& phases) {
    std::vector<OutcomeScore> scores;
    score_outcomes_into(paths, phases.phases().data(), scores);
    return scores;
}

void score_outcomes_into(const std::vector<OutcomePaths>& paths, const double* phases,
                         std::vector<OutcomeScore>& out) {
    out.assign(paths.size(), OutcomeScore{});
    for (std::size_t x = 0; x < paths.size(); ++x) {
        const OutcomePaths& p = paths[x];
        const std::size_t n = p.magnitudes.size();
        OutcomeScore& s = out[x];
        for (std::size_t i = 0; i < n; ++i) {
            s.classical_part += p.magnitudes[i] * p.magnitudes[i];
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (p.magnitudes[i] == 0.0) {
                continue;
            }
            const double phase_i = phases[i] + p.cpt_phases[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                if (p.magnitudes[j] == 0.0) {
                    continue;
                }
                s.interference_part += 2.0 * p.magnitudes[i] * p.magnitudes[j] *
                                       std::cos(phase_i - (phases[j] + p.cpt_phases[j]));
            }
        }
        s.unnormalized = s.classical_part + s.interference_part;
        if (s.unnormalized < 0.0) {
            if (s.unnormalized < -kNegativeScoreSlack) {
                throw std::logic_error("interference drove a squared modulus below zero");
            }
            s.unnormalized = 0.0;
        }
    }
}

InferenceResult normalize(const AmplitudeNetwork& net, const QueryLayout& layout,
                          std::vector<OutcomeScore> scores) {
    double total = 0.0;
    for (const OutcomeScore& s : scores) {
        total += s.unnormalized;
    }
    if (total <= 0.0) {
        throw DegenerateQueryError("every outcome of query '" + net.variable(layout.query).name +
                                   "' scored zero; no normalization exists");
    }
    const double gamma = 1.0 / total;
    std::vector<double> normalized(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        normalized[i] = gamma * scores[i].unnormalized;
    }
    return InferenceResult(net.variable(layout.query).outcomes, std::move(scores), gamma,
                           std::move(normalized));
}

}  // namespace detail

std::size_t configuration_count(const AmplitudeNetwork& net, std::string_view query,
                                const Evidence& evidence) {
    return detail::make_layout(net, query, evidence).config_count;
}

Amplitude joint_amplitude(const AmplitudeNetwork& net,
                          const std::map<std::string, std::string>& full_assignment) {
    std::vector<std::size_t> assignment(net.size());
    std::vector<bool> seen(net.size(), false);
    for (const auto& [name, outcome] : full_assignment) {
        std::size_t v = net.index_of(name);
        assignment[v] = net.variable(v).outcome_index(outcome);
        seen[v] = true;
    }
    for (std::size_t v = 0; v < net.size(); ++v) {
        if (!seen[v]) {
            throw ValidationError("full assignment is missing variable '" + net.variable(v).name +
                                  "'");
        }
    }
    Amplitude product(1.0, 0.0);
    for (std::size_t v = 0; v < net.size(); ++v) {
        product = product * net.amplitude(v, assignment);
    }
    return product;
}

InferenceResult infer(const AmplitudeNetwork& net, std::string_view query,
                      const Evidence& evidence, const PhaseAssignment& phases) {
    detail::QueryLayout layout = detail::make_layout(net, query, evidence);
    if (phases.size() != layout.config_count) {
        throw ValidationError("phase assignment has " + std::to_string(phases.size()) +
                              " entries, query needs one per configuration (" +
                              std::to_string(layout.config_count) + ")");
    }
    auto paths = detail::enumerate_paths(net, layout);
    return detail::normalize(net, layout, detail::score_outcomes(paths, phases));
}

InferenceResult infer(const AmplitudeNetwork& net, std::string_view query,
                      const Evidence& evidence, double theta_difference) {
    return infer(net, query, evidence, PhaseAssignment::from_difference(theta_difference));
}

InferenceResult infer_classical(const AmplitudeNetwork& net, std::string_view query,
                                const Evidence& evidence) {
    detail::QueryLayout layout = detail::make_layout(net, query, evidence);
    auto paths = detail::enumerate_paths(net, layout);
    std::vector<OutcomeScore> scores(paths.size());
    for (std::size_t x = 0; x < paths.size(); ++x) {
        for (double m : paths[x].magnitudes) {
            scores[x].classical_part += m * m;
        }
        scores[x].unnormalized = scores[x].classical_part;
    }
    return detail::normalize(net, layout, std::move(scores));
}

InferenceResult enumerate_joint_oracle(const AmplitudeNetwork& net, std::string_view query,
                                       const Evidence& evidence, const PhaseAssignment& phases) {
    detail::QueryLayout layout = detail::make_layout(net, query, evidence);
    if (phases.size() != layout.config_count) {
        throw ValidationError("phase assignment has " + std::to_string(phases.size()) +
                              " entries, query needs one per configuration (" +
                              std::to_string(layout.config_count) + ")");
    }

    std::size_t joint_states = 1;
    for (const Variable& v : net.variables()) {
        joint_states *= v.arity();
        if (joint_states > (std::size_t{1} << 20)) {
            throw ValidationError("network too large for joint enumeration (over 2^20 states)");
        }
    }

    const Variable& query_var = net.variable(layout.query);
    std::vector<std::complex<double>> sums(query_var.arity(), 0.0);
    std::vector<double> classical(query_var.arity(), 0.0);

    // walk every full joint assignment independently of the path enumeration
    // used by infer
    std::vector<std::size_t> assignment(net.size(), 0);
    for (std::size_t state = 0; state < joint_states; ++state) {
        std::size_t rest = state;
        for (std::size_t v = net.size(); v-- > 0;) {
            assignment[v] = rest % net.variable(v).arity();
            rest /= net.variable(v).arity();
        }
        bool consistent = true;
        for (std::size_t v = 0; v < net.size() && consistent; ++v) {
            if (v != layout.query &&
                std::find(layout.unobserved.begin(), layout.unobserved.end(), v) ==
                    layout.unobserved.end()) {
                consistent = assignment[v] == layout.base_assignment[v];
            }
        }
        if (!consistent) {
            continue;
        }
        // configuration index of this assignment's unobserved outcomes
        std::size_t config = 0;
        for (std::size_t v : layout.unobserved) {
            config = config * net.variable(v).arity() + assignment[v];
        }
        std::complex<double> path = std::polar(1.0, phases[config]);
        for (std::size_t v = 0; v < net.size(); ++v) {
            const Amplitude& a = net.amplitude(v, assignment);
            path *= std::polar(a.magnitude(), a.phase());
        }
        sums[assignment[layout.query]] += path;
        classical[assignment[layout.query]] += std::norm(path);
    }

    std::vector<OutcomeScore> scores(query_var.arity());
    for (std::size_t x = 0; x < scores.size(); ++x) {
        scores[x].classical_part = classical[x];
        scores[x].unnormalized = std::norm(sums[x]);
        scores[x].interference_part = scores[x].unnormalized - scores[x].classical_part;
    }
    return detail::normalize(net, layout, std::move(scores));
}

InferenceResult enumerate_joint_oracle(const AmplitudeNetwork& net, std::string_view query,
                                       const Evidence& evidence, double theta_difference) {
    return enumerate_joint_oracle(net, query, evidence,
                                  PhaseAssignment::from_difference(theta_difference));
}

}  // namespace qlid
