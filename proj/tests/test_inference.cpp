#include "qlid/inference.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "qlid/errors.hpp"
#include "random_networks.hpp"

using namespace qlid;
using testgen::chain_network;

namespace {
// shafir1992 conditionals: the workhorse example
const double kShafirKnownDefect = 0.97;
const double kShafirKnownCooperate = 0.84;
}  // namespace

TEST_CASE("unknown-condition inference reproduces the corpus probabilities") {
    AmplitudeNetwork net = chain_network(kShafirKnownDefect, kShafirKnownCooperate);

    SUBCASE("interference at the published phase pulls 0.905 down to 0.63") {
        InferenceResult r = infer(net, "x2", {}, 2.8151);
        CHECK(r.probability("t") == doctest::Approx(0.63000146353249848).epsilon(1e-12));
        CHECK(std::abs(r.probability("t") - 0.63) <= 5e-3);
        // decomposition of the queried outcome
        CHECK(r.score("t").classical_part == doctest::Approx(0.905).epsilon(1e-12));
        CHECK(r.score("t").interference_part ==
              doctest::Approx(-0.85497781208433715).epsilon(1e-12));
        CHECK(r.score("f").classical_part == doctest::Approx(0.095).epsilon(1e-12));
        CHECK(r.score("f").interference_part ==
              doctest::Approx(-0.065622074088653517).epsilon(1e-11));
        CHECK(r.gamma() > 0.0);
    }
    SUBCASE("a quarter-turn phase difference cancels the interference") {
        InferenceResult r = infer(net, "x2", {}, kPi / 2);
        CHECK(r.probability("t") == doctest::Approx(0.9050).epsilon(1e-12));
        CHECK(std::abs(r.score("t").interference_part) <= 1e-12);
    }
    SUBCASE("evidence on the chain collapses to the conditional row") {
        // one unobserved configuration remains, so a single phase applies
        for (double phase : {0.0, 1.0, 2.5, 5.0}) {
            InferenceResult r = infer(net, "x2", {{"x1", "t"}}, PhaseAssignment({phase}));
            CHECK(r.probability("t") == doctest::Approx(0.97).epsilon(1e-12));
        }
    }
}

TEST_CASE("li2002 game 1 at its published phase") {
    AmplitudeNetwork net = chain_network(0.7333, 0.6670);
    InferenceResult r = infer(net, "x2", {}, 3.0170);
    CHECK(r.probability("t") == doctest::Approx(0.59938907485955324).epsilon(1e-12));
    CHECK(std::abs(r.probability("t") - 0.60) <= 5e-3);
}

TEST_CASE("infer_classical drops every cross term") {
    SUBCASE("shafir unknown condition") {
        AmplitudeNetwork net = chain_network(kShafirKnownDefect, kShafirKnownCooperate);
        InferenceResult r = infer_classical(net, "x2", {});
        CHECK(r.probability("t") == doctest::Approx(0.9050).epsilon(1e-12));
        CHECK(r.score("t").interference_part == 0.0);
    }
    SUBCASE("li2002 game 3") {
        AmplitudeNetwork net = chain_network(0.9000, 0.8667);
        InferenceResult r = infer_classical(net, "x2", {});
        CHECK(r.probability("t") == doctest::Approx(0.88335).epsilon(1e-12));
    }
    SUBCASE("a single-node network is already classical") {
        Variable x{"x", {"t", "f"}};
        AmplitudeCpt prior("x", {}, {{from_probability(0.3), from_probability(0.7)}});
        AmplitudeNetwork net({x}, {prior});
        InferenceResult r = infer_classical(net, "x", {});
        CHECK(r.probability("t") == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(r.probability("f") == doctest::Approx(0.7).epsilon(1e-12));
        // no unobserved variables: a single empty configuration, no interference
        InferenceResult q = infer(net, "x", {}, PhaseAssignment({1.234}));
        CHECK(q.probability("t") == doctest::Approx(0.3).epsilon(1e-12));
        CHECK(q.score("t").interference_part == 0.0);
    }
}

TEST_CASE("contract violations are rejected") {
    AmplitudeNetwork net = chain_network(0.97, 0.84);
    SUBCASE("evidence on the query variable") {
        CHECK_THROWS_AS(infer(net, "x2", {{"x2", "t"}}, 1.0), ValidationError);
        CHECK_THROWS_AS(infer_classical(net, "x2", {{"x2", "t"}}), ValidationError);
    }
    SUBCASE("phase assignment length must match the configuration count") {
        CHECK(configuration_count(net, "x2", {}) == 2);
        CHECK_THROWS_AS(infer(net, "x2", {}, PhaseAssignment({1.0, 2.0, 3.0})), ValidationError);
        CHECK_THROWS_AS(infer(net, "x2", {{"x1", "t"}}, 1.0), ValidationError);
    }
    SUBCASE("unknown names") {
        CHECK_THROWS_AS(infer(net, "nope", {}, 1.0), ValidationError);
        CHECK_THROWS_AS(infer(net, "x2", {{"nope", "t"}}, 1.0), ValidationError);
    }
}

TEST_CASE("a query with every path annihilated is degenerate") {
    Variable x1{"x1", {"t", "f"}};
    Variable x2{"x2", {"t", "f"}};
    AmplitudeCpt prior("x1", {}, {{from_probability(1.0), from_probability(0.0)}});
    AmplitudeCpt copy("x2", {"x1"},
                      {{from_probability(1.0), from_probability(0.0)},
                       {from_probability(0.0), from_probability(1.0)}});
    AmplitudeNetwork net({x1, x2}, {prior, copy});
    // evidence selecting the zero-amplitude prior entry is allowed, but every
    // path through it vanishes
    CHECK_THROWS_AS(infer(net, "x2", {{"x1", "f"}}, PhaseAssignment({0.0})),
                    DegenerateQueryError);
    CHECK_THROWS_AS(infer_classical(net, "x2", {{"x1", "f"}}), DegenerateQueryError);
}

TEST_CASE("oracle equivalence on random networks") {
    std::mt19937_64 rng(20250612);
    for (int trial = 0; trial < 1000; ++trial) {
        AmplitudeNetwork net = testgen::random_network(rng);
        testgen::RandomQuery q = testgen::random_query(rng, net);
        InferenceResult fast = infer(net, q.query, q.evidence, q.phases);
        InferenceResult slow = enumerate_joint_oracle(net, q.query, q.evidence, q.phases);
        REQUIRE(fast.outcomes() == slow.outcomes());
        for (std::size_t i = 0; i < fast.outcomes().size(); ++i) {
            CHECK(std::abs(fast.normalized()[i] - slow.normalized()[i]) <= 1e-10);
            CHECK(std::abs(fast.scores()[i].unnormalized - slow.scores()[i].unnormalized) <=
                  1e-10);
        }
        CHECK(std::abs(fast.gamma() - slow.gamma()) <= 1e-6 * std::abs(slow.gamma()));
    }
}

TEST_CASE("oracle matches the frozen shafir value") {
    AmplitudeNetwork net = chain_network(kShafirKnownDefect, kShafirKnownCooperate);
    InferenceResult fast = infer(net, "x2", {}, 2.8151);
    InferenceResult slow = enumerate_joint_oracle(net, "x2", {}, 2.8151);
    for (std::size_t i = 0; i < fast.outcomes().size(); ++i) {
        CHECK(std::abs(fast.normalized()[i] - slow.normalized()[i]) <= 1e-10);
    }
    CHECK(slow.probability("t") == doctest::Approx(0.63000146353249848).epsilon(1e-12));
}

TEST_CASE("oracle refuses oversized networks") {
    // 21 binary variables exceed the joint-enumeration guard
    std::vector<Variable> variables;
    std::vector<AmplitudeCpt> cpts;
    for (int i = 0; i < 21; ++i) {
        const std::string name = "v" + std::to_string(i);
        variables.push_back(Variable{name, {"t", "f"}});
        cpts.emplace_back(name, std::vector<std::string>{},
                          std::vector<std::vector<Amplitude>>{
                              {from_probability(0.5), from_probability(0.5)}});
    }
    AmplitudeNetwork net(std::move(variables), std::move(cpts));
    std::vector<double> phases(std::size_t{1} << 20, 0.0);
    CHECK_THROWS_AS(enumerate_joint_oracle(net, "v0", {}, PhaseAssignment(std::move(phases))),
                    ValidationError);
}

TEST_CASE("zero-interference phases reproduce the classical result") {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> prob(0.02, 0.98);
    for (int trial = 0; trial < 1000; ++trial) {
        AmplitudeNetwork net = chain_network(prob(rng), prob(rng));
        InferenceResult quantum = infer(net, "x2", {}, kPi / 2);
        InferenceResult classical = infer_classical(net, "x2", {});
        for (std::size_t i = 0; i < quantum.outcomes().size(); ++i) {
            CHECK(std::abs(quantum.normalized()[i] - classical.normalized()[i]) <= 1e-12);
        }
        InferenceResult oracle = enumerate_joint_oracle(net, "x2", {}, kPi / 2);
        for (std::size_t i = 0; i < oracle.outcomes().size(); ++i) {
            CHECK(std::abs(oracle.normalized()[i] - classical.normalized()[i]) <= 1e-10);
        }
    }
}

TEST_CASE("normalization and interference bounds hold on random networks") {
    std::mt19937_64 rng(987654);
    for (int trial = 0; trial < 300; ++trial) {
        AmplitudeNetwork net = testgen::random_network(rng);
        testgen::RandomQuery q = testgen::random_query(rng, net);
        InferenceResult r = infer(net, q.query, q.evidence, q.phases);

        double total = 0.0;
        for (double p : r.normalized()) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
        CHECK(r.gamma() > 0.0);

        // |interference| is capped by the pairwise Cauchy-Schwarz bound:
        // unnormalized stays within [0, (sum of path magnitudes)^2]
        for (const OutcomeScore& s : r.scores()) {
            CHECK(s.unnormalized >= 0.0);
            CHECK(s.unnormalized == doctest::Approx(s.classical_part + s.interference_part)
                                        .epsilon(1e-12));
        }
    }
}

TEST_CASE("interference respects the pairwise magnitude bound") {
    std::mt19937_64 rng(13579);
    std::uniform_real_distribution<double> prob(0.02, 0.98);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int trial = 0; trial < 500; ++trial) {
        const double p_t = prob(rng);
        const double p_f = prob(rng);
        AmplitudeNetwork net = chain_network(p_t, p_f);
        InferenceResult r = infer(net, "x2", {}, angle(rng));
        // two configurations: the exact Cauchy-Schwarz cap is 2*m1*m2
        const double bound_t = 2.0 * std::sqrt(0.5 * p_t) * std::sqrt(0.5 * p_f);
        const double bound_f = 2.0 * std::sqrt(0.5 * (1.0 - p_t)) * std::sqrt(0.5 * (1.0 - p_f));
        CHECK(std::abs(r.score("t").interference_part) <= bound_t + 1e-9);
        CHECK(std::abs(r.score("f").interference_part) <= bound_f + 1e-9);
    }
}

TEST_CASE("the unnormalized score grows strictly with the cosine") {
    AmplitudeNetwork net = chain_network(0.97, 0.84);
    double previous = -1.0;
    // theta decreasing over (0, pi) makes cos(theta) strictly increasing
    for (double theta : {3.0, 2.5, 2.0, 1.5, 1.0, 0.5}) {
        InferenceResult r = infer(net, "x2", {}, theta);
        const double score = r.score("t").unnormalized;
        CHECK(score > previous);
        previous = score;
    }
}
