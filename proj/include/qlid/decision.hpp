#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qlid/network.hpp"

namespace qlid {

// Deterministic utility over (chance state, action) pairs. Covers the full
// Cartesian product; every entry finite.
class UtilityTable {
public:
    UtilityTable(std::vector<std::string> states, std::vector<std::string> actions,
                 std::vector<std::vector<double>> values);  // values[state][action]

    const std::vector<std::string>& states() const { return states_; }
    const std::vector<std::string>& actions() const { return actions_; }
    double value(std::size_t state, std::size_t action) const { return values_[state][action]; }
    double value(std::string_view state, std::string_view action) const;

private:
    std::vector<std::string> states_;
    std::vector<std::string> actions_;
    std::vector<std::vector<double>> values_;
};

// The influence diagram: an amplitude network plus a decision node and a
// utility node. The utility is keyed on the outcomes of `chance_parent`
// (the variable marginalized out of the utility factor) and the decision's
// actions; the decision rule is conditioned on `context_variable`.
// `chance_parent` must be a root variable and the sole parent of
// `context_variable`, which is the diagram shape the utility factorization
// assumes.
class DecisionProblem {
public:
    DecisionProblem(AmplitudeNetwork network, std::string chance_parent,
                    std::string context_variable, std::vector<std::string> actions,
                    UtilityTable utility);

    const AmplitudeNetwork& network() const { return network_; }
    const Variable& chance_parent() const { return network_.variable(chance_parent_); }
    const Variable& context_variable() const { return network_.variable(context_); }
    const std::vector<std::string>& actions() const { return actions_; }
    const UtilityTable& utility() const { return utility_; }

private:
    AmplitudeNetwork network_;
    std::size_t chance_parent_;
    std::size_t context_;
    std::vector<std::string> actions_;
    UtilityTable utility_;
};

// The utility factor of one (context, action) cell split into a weight
// vector and a utility vector whose inner product is the expected utility:
//   q = [squared path weight per chance state..., interference term]
//   u = [utility per chance state..., product of the utilities]
struct QuantumMeuFactor {
    std::vector<double> q;
    std::vector<double> u;
    double value = 0.0;

    double interference() const { return q.back(); }
};

enum class MeuMode { classical, quantum };

// Expected utilities per (context outcome, action) plus the deterministic
// argmax choice per context. Quantum results retain the factor
// decomposition of every cell.
class MeuResult {
public:
    MeuResult(MeuMode mode, std::vector<std::string> contexts, std::vector<std::string> actions,
              std::vector<std::vector<double>> eu, std::vector<std::vector<QuantumMeuFactor>> factors);

    MeuMode mode() const { return mode_; }
    const std::vector<std::string>& contexts() const { return contexts_; }
    const std::vector<std::string>& actions() const { return actions_; }
    double expected_utility(std::string_view context, std::string_view action) const;
    double expected_utility(std::size_t context, std::size_t action) const {
        return eu_[context][action];
    }
    // Action chosen for a context: maximal expected utility, ties broken in
    // favor of the earliest declared action.
    const std::string& chosen(std::string_view context) const;
    std::size_t chosen_index(std::size_t context) const { return chosen_[context]; }
    const QuantumMeuFactor& factor(std::string_view context, std::string_view action) const;

private:
    std::size_t context_index(std::string_view context) const;
    std::size_t action_index(std::string_view action) const;

    MeuMode mode_;
    std::vector<std::string> contexts_;
    std::vector<std::string> actions_;
    std::vector<std::vector<double>> eu_;
    std::vector<std::vector<QuantumMeuFactor>> factors_;
    std::vector<std::size_t> chosen_;
};

// Plain expected utility of a distribution against a utility map; the two
// must share exactly the same keys.
double expected_utility(const std::map<std::string, double>& distribution,
                        const std::map<std::string, double>& utility);

// Classical maximum expected utility: per context z and action a,
//   mu(z, a) = sum over chance states x of Pr(x) * Pr(z | x) * U(x, a)
// with the CPT magnitudes read classically (squared). Scores are the raw
// factor values; no renormalization is applied.
MeuResult classical_meu(const DecisionProblem& problem);

// Interference-adjusted expected utility for a binary chance parent. Per
// context z and action a the factor is the inner product of
//   q = [p_t, p_f, 2*sqrt(p_t*p_f)*cos(theta)]
//   u = [U(t, a), U(f, a), U(t, a)*U(f, a)]
// where p_t, p_f are the squared path weights of the two chance states.
// theta enters through cos only, so results are symmetric under
// theta -> 2*pi - theta; the angle is folded into [0, pi] so the symmetry
// holds exactly in floating point.
MeuResult quantum_meu(const DecisionProblem& problem, double theta);

// The deterministic decision rule: context outcome -> chosen action.
std::map<std::string, std::string> decision_rule(const MeuResult& meu);

}  // namespace qlid
