#include "qlid/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qlid/errors.hpp"
#include "random_networks.hpp"

using namespace qlid;
using testgen::chain_network;

namespace {

bool contains_solution(const ThetaFitResult& fit, double theta, double tolerance) {
    return std::any_of(fit.solutions.begin(), fit.solutions.end(),
                       [&](double s) { return std::abs(s - theta) <= tolerance; });
}

bool inside_any(const std::vector<ThetaInterval>& intervals, double theta) {
    return std::any_of(intervals.begin(), intervals.end(), [&](const ThetaInterval& interval) {
        return theta >= interval.lo && theta <= interval.hi;
    });
}

}  // namespace

TEST_CASE("fitting the shafir unknown-condition probability recovers the published phase") {
    AmplitudeNetwork net = chain_network(0.97, 0.84);
    ThetaFitResult fit = fit_theta(net, "x2", {}, "t", 0.63);
    REQUIRE_FALSE(fit.solutions.empty());
    CHECK(contains_solution(fit, 2.8151, 2e-3));
    CHECK(contains_solution(fit, kTwoPi - 2.8151, 2e-3));
    // exact root of the rational form, frozen from an independent evaluation
    CHECK(contains_solution(fit, 2.8151012479324854, 1e-9));
    CHECK(contains_solution(fit, 3.4680840592471011, 1e-9));
    for (double residual : fit.residuals) {
        CHECK(residual <= 1e-6);
    }
    CHECK(fit.grid_resolution == doctest::Approx(kTwoPi / 1e6).epsilon(1e-12));
}

TEST_CASE("a target equal to the classical probability is hit at a quarter turn") {
    // game 6: the published unknown-condition probability equals the
    // classical one, so the interference must vanish
    AmplitudeNetwork net = chain_network(0.7667, 0.8333);
    ThetaFitResult fit = fit_theta(net, "x2", {}, "t", 0.8000);
    CHECK(contains_solution(fit, kPi / 2, 1e-6));
    CHECK(contains_solution(fit, 3 * kPi / 2, 1e-6));
}

TEST_CASE("unattainable targets report the envelope") {
    AmplitudeNetwork net = chain_network(0.97, 0.84);
    try {
        fit_theta(net, "x2", {}, "t", 0.999999, 4096);
        FAIL("expected NoSolutionError");
    } catch (const NoSolutionError& e) {
        CHECK(e.target() == 0.999999);
        // envelope must agree with a probability sweep at matching resolution
        SweepCurve curve = sweep_probability(net, "x2", {}, "t", 4096);
        double lo = 1.0;
        double hi = 0.0;
        for (const SweepSample& s : curve.samples) {
            REQUIRE(s.value.has_value());
            lo = std::min(lo, *s.value);
            hi = std::max(hi, *s.value);
        }
        CHECK(e.attainable_min() == doctest::Approx(lo).epsilon(1e-12));
        CHECK(e.attainable_max() == doctest::Approx(hi).epsilon(1e-12));
        // frozen envelope of the shafir network
        CHECK(e.attainable_max() == doctest::Approx(0.91669034770449277).epsilon(1e-9));
        CHECK(e.attainable_min() == doctest::Approx(0.083309652295507232).epsilon(1e-9));
    }
}

TEST_CASE("fit validation") {
    AmplitudeNetwork net = chain_network(0.97, 0.84);
    CHECK_THROWS_AS(fit_theta(net, "x2", {}, "t", 1.5), ValidationError);
    CHECK_THROWS_AS(fit_theta(net, "x2", {}, "t", -0.1), ValidationError);
    // evidence removes the only unobserved variable: no phase parameter left
    CHECK_THROWS_AS(fit_theta(net, "x2", {{"x1", "t"}}, "t", 0.5), ValidationError);
}

TEST_CASE("round-trip: a generated target refits to the generating phase") {
    std::mt19937_64 rng(112358);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    std::uniform_real_distribution<double> angle(1e-6, kPi - 1e-6);
    for (int trial = 0; trial < 500; ++trial) {
        AmplitudeNetwork net = chain_network(prob(rng), prob(rng));
        const double theta0 = angle(rng);
        const double target = infer(net, "x2", {}, theta0).probability("t");
        ThetaFitResult fit = fit_theta(net, "x2", {}, "t", target, 100000);
        REQUIRE_FALSE(fit.solutions.empty());
        double best = kTwoPi;
        for (double s : fit.solutions) {
            best = std::min(best, std::min(std::abs(s - theta0),
                                           std::abs(s - (kTwoPi - theta0))));
        }
        CHECK(best <= 1e-4);
    }
}

TEST_CASE("solutions close under mirroring") {
    std::mt19937_64 rng(60221023);
    std::uniform_real_distribution<double> prob(0.05, 0.95);
    std::uniform_real_distribution<double> target_dist(0.0, 1.0);
    int fitted = 0;
    for (int trial = 0; trial < 100; ++trial) {
        AmplitudeNetwork net = chain_network(prob(rng), prob(rng));
        ThetaFitResult fit;
        try {
            fit = fit_theta(net, "x2", {}, "t", target_dist(rng), 100000);
        } catch (const NoSolutionError&) {
            continue;
        }
        ++fitted;
        for (double s : fit.solutions) {
            const double mirror = canonical_phase(kTwoPi - s);
            bool found = std::any_of(fit.solutions.begin(), fit.solutions.end(), [&](double t) {
                return std::abs(t - mirror) <= fit.grid_resolution + 1e-9;
            });
            CHECK(found);
        }
    }
    CHECK(fitted > 20);  // the sampler must actually exercise the property
}

TEST_CASE("probability sweeps sample a uniform phase grid") {
    AmplitudeNetwork net = chain_network(0.97, 0.84);
    SweepCurve curve = sweep_probability(net, "x2", {}, "t", 4);
    REQUIRE(curve.samples.size() == 4);
    CHECK(curve.samples[0].theta == 0.0);
    CHECK(curve.samples[1].theta == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(curve.samples[2].theta == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(curve.samples[3].theta == doctest::Approx(3 * kPi / 2).epsilon(1e-15));
    REQUIRE(curve.samples[1].value.has_value());
    CHECK(*curve.samples[1].value == doctest::Approx(0.9050).epsilon(1e-12));

    SUBCASE("the curve is symmetric about pi") {
        SweepCurve dense = sweep_probability(net, "x2", {}, "t", 64);
        for (std::size_t k = 1; k < 32; ++k) {
            REQUIRE(dense.samples[k].value.has_value());
            REQUIRE(dense.samples[64 - k].value.has_value());
            CHECK(std::abs(*dense.samples[k].value - *dense.samples[64 - k].value) <= 1e-12);
        }
    }
    SUBCASE("steps below 2 are rejected") {
        CHECK_THROWS_AS(sweep_probability(net, "x2", {}, "t", 1), ValidationError);
    }
}

TEST_CASE("degenerate phases become gap samples") {
    // the uniform chain annihilates every outcome at theta = pi
    AmplitudeNetwork net = chain_network(0.5, 0.5);
    SweepCurve curve = sweep_probability(net, "x2", {}, "t", 4);
    CHECK(curve.samples[0].value.has_value());
    CHECK(curve.samples[1].value.has_value());
    CHECK_FALSE(curve.samples[2].value.has_value());
    CHECK(curve.samples[3].value.has_value());
}

TEST_CASE("expected-utility sweeps find the cooperate dominance region") {
    UtilityTable utility({"t", "f"}, {"defect", "cooperate"}, {{30, 25}, {85, 75}});
    DecisionProblem problem(chain_network(0.97, 0.84), "x1", "x2", {"defect", "cooperate"},
                            std::move(utility));
    EuSweepResult sweep = sweep_expected_utility(problem, 256);
    REQUIRE(sweep.contexts.size() == 2);
    REQUIRE(sweep.actions.size() == 2);

    for (const ContextEuSweep& context : sweep.contexts) {
        REQUIRE_FALSE(context.dominance.empty());
        // the published phase flips the choice in both contexts
        CHECK(inside_any(context.dominance, 2.8151));
        // a quarter turn is classical: defect keeps dominating
        CHECK_FALSE(inside_any(context.dominance, kPi / 2));
        CHECK_FALSE(inside_any(context.dominance, 3 * kPi / 2));

        // curves agree with direct evaluation on grid points
        for (std::size_t k = 0; k < 256; k += 37) {
            const double theta = context.curves[0].samples[k].theta;
            MeuResult meu = quantum_meu(problem, theta);
            CHECK(*context.curves[0].samples[k].value ==
                  doctest::Approx(meu.expected_utility(context.context, "defect"))
                      .epsilon(1e-12));
            CHECK(*context.curves[1].samples[k].value ==
                  doctest::Approx(meu.expected_utility(context.context, "cooperate"))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("dominance intervals are consistent with the decision rule") {
    std::mt19937_64 rng(1618);
    std::uniform_real_distribution<double> pick(0.05, 0.95);
    for (int trial = 0; trial < 40; ++trial) {
        DecisionProblem problem = testgen::random_problem(rng);
        EuSweepResult sweep = sweep_expected_utility(problem, 128);
        for (const ContextEuSweep& context : sweep.contexts) {
            for (const ThetaInterval& interval : context.dominance) {
                // sample interior points away from the refined boundaries
                for (double fraction : {0.25, 0.5, 0.75}) {
                    const double width = interval.hi - interval.lo;
                    if (width <= 1e-3) {
                        continue;
                    }
                    const double theta = interval.lo + fraction * width;
                    MeuResult meu = quantum_meu(problem, theta);
                    CHECK(meu.chosen(context.context) == problem.actions()[1]);
                }
            }
        }
    }
}

TEST_CASE("destructive interference inside the shafir dominance region") {
    UtilityTable utility({"t", "f"}, {"defect", "cooperate"}, {{30, 25}, {85, 75}});
    DecisionProblem problem(chain_network(0.97, 0.84), "x1", "x2", {"defect", "cooperate"},
                            std::move(utility));
    EuSweepResult sweep = sweep_expected_utility(problem, 256);
    for (const ContextEuSweep& context : sweep.contexts) {
        for (const ThetaInterval& interval : context.dominance) {
            const double theta = 0.5 * (interval.lo + interval.hi);
            MeuResult meu = quantum_meu(problem, theta);
            CHECK(meu.factor(context.context, "defect").interference() < 0.0);
        }
    }
}
