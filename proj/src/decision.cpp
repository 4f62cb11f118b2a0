#include "qlid/decision.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qlid/errors.hpp"

namespace qlid {

namespace {

// cos with the angle folded into [0, pi], making cos(theta) and
// cos(2*pi - theta) evaluate on the same representative.
double folded_cos(double theta) {
    double t = canonical_phase(theta);
    if (t > kPi) {
        t = kTwoPi - t;
    }
    return std::cos(t);
}

std::vector<std::size_t> argmax_per_context(const std::vector<std::vector<double>>& eu) {
    std::vector<std::size_t> chosen(eu.size(), 0);
    for (std::size_t z = 0; z < eu.size(); ++z) {
        for (std::size_t a = 1; a < eu[z].size(); ++a) {
            if (eu[z][a] > eu[z][chosen[z]]) {
                chosen[z] = a;
            }
        }
    }
    return chosen;
}

}  // namespace

UtilityTable::UtilityTable(std::vector<std::string> states, std::vector<std::string> actions,
                           std::vector<std::vector<double>> values)
    : states_(std::move(states)), actions_(std::move(actions)), values_(std::move(values)) {
    if (states_.empty() || actions_.empty()) {
        throw ValidationError("utility table needs at least one state and one action");
    }
    if (values_.size() != states_.size()) {
        throw ValidationError("utility table has " + std::to_string(values_.size()) +
                              " rows, expected one per state (" + std::to_string(states_.size()) +
                              ")");
    }
    for (const auto& row : values_) {
        if (row.size() != actions_.size()) {
            throw ValidationError("utility table row width does not match the action count");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw ValidationError("utility table entries must be finite");
            }
        }
    }
}

double UtilityTable::value(std::string_view state, std::string_view action) const {
    auto state_it = std::find(states_.begin(), states_.end(), state);
    if (state_it == states_.end()) {
        throw ValidationError("utility table has no state '" + std::string(state) + "'");
    }
    auto action_it = std::find(actions_.begin(), actions_.end(), action);
    if (action_it == actions_.end()) {
        throw ValidationError("utility table has no action '" + std::string(action) + "'");
    }
    return values_[state_it - states_.begin()][action_it - actions_.begin()];
}

DecisionProblem::DecisionProblem(AmplitudeNetwork network, std::string chance_parent,
                                 std::string context_variable, std::vector<std::string> actions,
                                 UtilityTable utility)
    : network_(std::move(network)),
      chance_parent_(network_.index_of(chance_parent)),
      context_(network_.index_of(context_variable)),
      actions_(std::move(actions)),
      utility_(std::move(utility)) {
    if (chance_parent_ == context_) {
        throw ValidationError("chance parent and context variable must be distinct");
    }
    if (!network_.parent_indices(chance_parent_).empty()) {
        throw ValidationError("chance parent '" + chance_parent + "' must be a root variable");
    }
    const auto& context_parents = network_.parent_indices(context_);
    if (context_parents.size() != 1 || context_parents[0] != chance_parent_) {
        throw ValidationError("context variable '" + context_variable +
                              "' must have the chance parent as its only parent");
    }
    if (actions_.empty()) {
        throw ValidationError("decision needs at least one action");
    }
    std::set<std::string_view> unique(actions_.begin(), actions_.end());
    if (unique.size() != actions_.size()) {
        throw ValidationError("duplicate action labels");
    }
    if (utility_.states() != this->chance_parent().outcomes) {
        throw ValidationError("utility table states must match the chance parent outcomes");
    }
    if (utility_.actions() != actions_) {
        throw ValidationError("utility table actions must match the declared actions");
    }
}

MeuResult::MeuResult(MeuMode mode, std::vector<std::string> contexts,
                     std::vector<std::string> actions, std::vector<std::vector<double>> eu,
                     std::vector<std::vector<QuantumMeuFactor>> factors)
    : mode_(mode),
      contexts_(std::move(contexts)),
      actions_(std::move(actions)),
      eu_(std::move(eu)),
      factors_(std::move(factors)),
      chosen_(argmax_per_context(eu_)) {}

std::size_t MeuResult::context_index(std::string_view context) const {
    auto it = std::find(contexts_.begin(), contexts_.end(), context);
    if (it == contexts_.end()) {
        throw ValidationError("no context outcome '" + std::string(context) + "'");
    }
    return static_cast<std::size_t>(it - contexts_.begin());
}

std::size_t MeuResult::action_index(std::string_view action) const {
    auto it = std::find(actions_.begin(), actions_.end(), action);
    if (it == actions_.end()) {
        throw ValidationError("no action '" + std::string(action) + "'");
    }
    return static_cast<std::size_t>(it - actions_.begin());
}

double MeuResult::expected_utility(std::string_view context, std::string_view action) const {
    return eu_[context_index(context)][action_index(action)];
}

const std::string& MeuResult::chosen(std::string_view context) const {
    return actions_[chosen_[context_index(context)]];
}

const QuantumMeuFactor& MeuResult::factor(std::string_view context, std::string_view action) const {
    if (factors_.empty()) {
        throw ValidationError("factors are only recorded for quantum results");
    }
    return factors_[context_index(context)][action_index(action)];
}

double expected_utility(const std::map<std::string, double>& distribution,
                        const std::map<std::string, double>& utility) {
    if (distribution.size() != utility.size()) {
        throw ValidationError("distribution and utility must share the same outcomes");
    }
    double eu = 0.0;
    for (const auto& [outcome, p] : distribution) {
        auto it = utility.find(outcome);
        if (it == utility.end()) {
            throw ValidationError("utility is missing outcome '" + outcome + "'");
        }
        if (p < 0.0) {
            throw ValidationError("distribution has a negative weight for '" + outcome + "'");
        }
        eu += p * it->second;
    }
    return eu;
}

namespace {

// Squared path weight of (chance state x, context outcome z):
// |psi(x) * psi(z | x)|^2, read straight off the CPTs.
std::vector<std::vector<double>> path_weights(const DecisionProblem& problem) {
    const AmplitudeNetwork& net = problem.network();
    const Variable& chance = problem.chance_parent();
    const Variable& context = problem.context_variable();
    std::size_t chance_index = net.index_of(chance.name);
    std::size_t context_index = net.index_of(context.name);

    std::vector<std::vector<double>> w(context.arity(), std::vector<double>(chance.arity()));
    const auto& prior_row = net.cpt(chance_index).rows()[0];
    const auto& context_rows = net.cpt(context_index).rows();
    for (std::size_t z = 0; z < context.arity(); ++z) {
        for (std::size_t x = 0; x < chance.arity(); ++x) {
            Amplitude path = prior_row[x] * context_rows[x][z];
            w[z][x] = born_probability(path);
        }
    }
    return w;
}

}  // namespace

MeuResult classical_meu(const DecisionProblem& problem) {
    const auto weights = path_weights(problem);
    const UtilityTable& u = problem.utility();
    const std::size_t n_actions = problem.actions().size();
    const std::size_t n_states = problem.chance_parent().arity();

    std::vector<std::vector<double>> eu(weights.size(), std::vector<double>(n_actions, 0.0));
    for (std::size_t z = 0; z < weights.size(); ++z) {
        for (std::size_t a = 0; a < n_actions; ++a) {
            for (std::size_t x = 0; x < n_states; ++x) {
                eu[z][a] += weights[z][x] * u.value(x, a);
            }
        }
    }
    return MeuResult(MeuMode::classical, problem.context_variable().outcomes, problem.actions(),
                     std::move(eu), {});
}

MeuResult quantum_meu(const DecisionProblem& problem, double theta) {
    if (problem.chance_parent().arity() != 2) {
        throw ValidationError("quantum MEU requires a binary chance parent, '" +
                              problem.chance_parent().name + "' has " +
                              std::to_string(problem.chance_parent().arity()) + " outcomes");
    }
    const auto weights = path_weights(problem);
    const UtilityTable& u = problem.utility();
    const std::size_t n_actions = problem.actions().size();
    const double c = folded_cos(theta);

    std::vector<std::vector<double>> eu(weights.size(), std::vector<double>(n_actions, 0.0));
    std::vector<std::vector<QuantumMeuFactor>> factors(weights.size());
    for (std::size_t z = 0; z < weights.size(); ++z) {
        const double p_t = weights[z][0];
        const double p_f = weights[z][1];
        const double interference = 2.0 * std::sqrt(p_t * p_f) * c;
        factors[z].resize(n_actions);
        for (std::size_t a = 0; a < n_actions; ++a) {
            QuantumMeuFactor& f = factors[z][a];
            f.q = {p_t, p_f, interference};
            f.u = {u.value(0, a), u.value(1, a), u.value(0, a) * u.value(1, a)};
            f.value = f.q[0] * f.u[0] + f.q[1] * f.u[1] + f.q[2] * f.u[2];
            eu[z][a] = f.value;
        }
    }
    return MeuResult(MeuMode::quantum, problem.context_variable().outcomes, problem.actions(),
                     std::move(eu), std::move(factors));
}

std::map<std::string, std::string> decision_rule(const MeuResult& meu) {
    std::map<std::string, std::string> rule;
    for (const std::string& context : meu.contexts()) {
        rule[context] = meu.chosen(context);
    }
    return rule;
}

}  // namespace qlid
