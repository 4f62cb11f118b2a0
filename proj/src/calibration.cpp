#include "qlid/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qlid/errors.hpp"

namespace qlid {

namespace {

constexpr std::size_t kBisectionIterations = 80;
constexpr double kBoundaryTolerance = 1e-6;  // phase tolerance for dominance endpoints

double grid_theta(std::size_t k, std::size_t steps) {
    return kTwoPi * static_cast<double>(k) / static_cast<double>(steps);
}

// Normalized probability of one outcome for a two-configuration query,
// computed through the same scoring path as infer. Returns nothing when the
// query is degenerate at this phase.
class TwoConfigProbe {
public:
    TwoConfigProbe(const AmplitudeNetwork& net, std::string_view query, const Evidence& evidence,
                   std::string_view target_outcome)
        : layout_(detail::make_layout(net, query, evidence)),
          paths_(detail::enumerate_paths(net, layout_)),
          outcome_(net.variable(layout_.query).outcome_index(target_outcome)) {
        if (layout_.config_count != 2) {
            throw ValidationError("phase fitting needs exactly two unobserved configurations, "
                                  "query has " +
                                  std::to_string(layout_.config_count));
        }
    }

    std::optional<double> operator()(double theta) {
        const double phases[2] = {theta, 0.0};
        detail::score_outcomes_into(paths_, phases, scores_);
        double total = 0.0;
        for (const OutcomeScore& s : scores_) {
            total += s.unnormalized;
        }
        if (total <= 0.0) {
            return std::nullopt;
        }
        return scores_[outcome_].unnormalized / total;
    }

private:
    detail::QueryLayout layout_;
    std::vector<detail::OutcomePaths> paths_;
    std::size_t outcome_;
    std::vector<OutcomeScore> scores_;
};

}  // namespace

ThetaFitResult fit_theta(const AmplitudeNetwork& net, std::string_view query,
                         const Evidence& evidence, std::string_view target_outcome,
                         double target_probability, std::size_t grid_points) {
    if (!(target_probability >= 0.0 && target_probability <= 1.0)) {
        throw ValidationError("target probability must lie in [0, 1]");
    }
    if (grid_points < 4) {
        throw ValidationError("grid needs at least 4 points");
    }
    TwoConfigProbe probe(net, query, evidence, target_outcome);

    ThetaFitResult result;
    result.grid_resolution = kTwoPi / static_cast<double>(grid_points);
    result.attainable_min = std::numeric_limits<double>::infinity();
    result.attainable_max = -std::numeric_limits<double>::infinity();

    std::vector<double> candidates;
    double prev_theta = 0.0;
    double prev_value = 0.0;
    bool have_prev = false;
    // one wrap-around sample closes the periodic scan
    for (std::size_t k = 0; k <= grid_points; ++k) {
        const double theta = k < grid_points ? grid_theta(k, grid_points) : kTwoPi;
        const auto p = probe(theta);
        if (!p) {
            have_prev = false;  // degenerate phase: restart bracketing
            continue;
        }
        result.attainable_min = std::min(result.attainable_min, *p);
        result.attainable_max = std::max(result.attainable_max, *p);
        const double f = *p - target_probability;
        if (f == 0.0 && k < grid_points) {
            candidates.push_back(theta);
        } else if (have_prev && ((prev_value < 0.0) != (f < 0.0)) && prev_value != 0.0) {
            // bisect the bracket down to floating-point resolution
            double lo = prev_theta;
            double hi = theta;
            double f_lo = prev_value;
            for (std::size_t i = 0; i < kBisectionIterations; ++i) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) {
                    break;
                }
                const auto pm = probe(mid);
                if (!pm) {
                    break;
                }
                const double fm = *pm - target_probability;
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (f_lo < 0.0)) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            candidates.push_back(canonical_phase(0.5 * (lo + hi)));
        }
        prev_theta = theta;
        prev_value = f;
        have_prev = true;
    }

    if (!std::isfinite(result.attainable_min)) {
        throw DegenerateQueryError("query is degenerate at every scanned phase");
    }
    if (candidates.empty()) {
        throw NoSolutionError(target_probability, result.attainable_min, result.attainable_max);
    }

    std::sort(candidates.begin(), candidates.end());
    for (double theta : candidates) {
        if (!result.solutions.empty() &&
            theta - result.solutions.back() < 0.5 * result.grid_resolution) {
            continue;  // duplicate root straddling a grid point
        }
        result.solutions.push_back(theta);
        const auto p = probe(theta);
        result.residuals.push_back(p ? std::abs(*p - target_probability)
                                     : std::numeric_limits<double>::quiet_NaN());
    }
    return result;
}

SweepCurve sweep_probability(const AmplitudeNetwork& net, std::string_view query,
                             const Evidence& evidence, std::string_view outcome,
                             std::size_t steps) {
    if (steps < 2) {
        throw ValidationError("a sweep needs at least 2 steps");
    }
    SweepCurve curve;
    curve.quantity = "probability";
    curve.query = std::string(query);
    curve.outcome = std::string(outcome);
    curve.samples.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double theta = grid_theta(k, steps);
        SweepSample sample{theta, std::nullopt};
        try {
            sample.value = infer(net, query, evidence, theta).probability(outcome);
        } catch (const DegenerateQueryError&) {
            // gap sample
        }
        curve.samples.push_back(sample);
    }
    return curve;
}

namespace {

// Difference EU[second action] - EU[first action] for one context.
double eu_difference(const DecisionProblem& problem, std::size_t context, double theta) {
    MeuResult meu = quantum_meu(problem, theta);
    return meu.expected_utility(context, 1) - meu.expected_utility(context, 0);
}

double refine_boundary(const DecisionProblem& problem, std::size_t context, double lo, double hi,
                       bool lo_positive) {
    while (hi - lo > kBoundaryTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if ((eu_difference(problem, context, mid) > 0.0) == lo_positive) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EuSweepResult sweep_expected_utility(const DecisionProblem& problem, std::size_t steps) {
    if (steps < 2) {
        throw ValidationError("a sweep needs at least 2 steps");
    }
    if (problem.actions().size() != 2) {
        throw ValidationError("expected-utility sweeps need exactly two actions");
    }

    const auto& contexts = problem.context_variable().outcomes;
    const auto& actions = problem.actions();

    EuSweepResult result;
    result.actions = actions;
    result.contexts.resize(contexts.size());
    for (std::size_t z = 0; z < contexts.size(); ++z) {
        result.contexts[z].context = contexts[z];
        for (const std::string& action : actions) {
            SweepCurve curve;
            curve.quantity = "expected_utility";
            curve.context = contexts[z];
            curve.action = action;
            curve.samples.reserve(steps);
            result.contexts[z].curves.push_back(std::move(curve));
        }
    }

    std::vector<std::vector<bool>> dominant(contexts.size(), std::vector<bool>(steps));
    for (std::size_t k = 0; k < steps; ++k) {
        const double theta = grid_theta(k, steps);
        MeuResult meu = quantum_meu(problem, theta);
        for (std::size_t z = 0; z < contexts.size(); ++z) {
            for (std::size_t a = 0; a < actions.size(); ++a) {
                result.contexts[z].curves[a].samples.push_back(
                    SweepSample{theta, meu.expected_utility(z, a)});
            }
            dominant[z][k] = meu.expected_utility(z, 1) > meu.expected_utility(z, 0);
        }
    }

    // dominance intervals: walk the circular grid, refine every flip
    for (std::size_t z = 0; z < contexts.size(); ++z) {
        std::vector<double> boundaries;  // refined flip positions
        std::vector<bool> rising;        // true when the flip enters dominance
        for (std::size_t k = 0; k < steps; ++k) {
            const std::size_t next = (k + 1) % steps;
            if (dominant[z][k] == dominant[z][next]) {
                continue;
            }
            const double lo = grid_theta(k, steps);
            const double hi = k + 1 < steps ? grid_theta(k + 1, steps) : kTwoPi;
            boundaries.push_back(refine_boundary(problem, z, lo, hi, dominant[z][k]));
            rising.push_back(!dominant[z][k]);
        }
        auto& intervals = result.contexts[z].dominance;
        if (boundaries.empty()) {
            if (dominant[z][0]) {
                intervals.push_back({0.0, kTwoPi});
            }
            continue;
        }
        for (std::size_t b = 0; b < boundaries.size(); ++b) {
            if (!rising[b]) {
                continue;
            }
            const double start = boundaries[b];
            const double end = boundaries[(b + 1) % boundaries.size()];
            if (end > start) {
                intervals.push_back({start, end});
            } else {
                // the interval straddles the 0 / 2*pi seam
                intervals.push_back({start, kTwoPi});
                intervals.push_back({0.0, end});
            }
        }
        std::sort(intervals.begin(), intervals.end(),
                  [](const ThetaInterval& a, const ThetaInterval& b) { return a.lo < b.lo; });
    }
    return result;
}

}  // namespace qlid
