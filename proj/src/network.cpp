#include "qlid/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qlid/errors.hpp"

namespace qlid {

namespace {
constexpr double kRowNormalizationTolerance = 1e-9;
}

std::size_t Variable::outcome_index(std::string_view label) const {
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i] == label) {
            return i;
        }
    }
    throw ValidationError("variable '" + name + "' has no outcome '" + std::string(label) + "'");
}

AmplitudeCpt::AmplitudeCpt(std::string variable, std::vector<std::string> parents,
                           std::vector<std::vector<Amplitude>> rows)
    : variable_(std::move(variable)), parents_(std::move(parents)), rows_(std::move(rows)) {
    if (rows_.empty()) {
        throw ValidationError("CPT for '" + variable_ + "' has no rows");
    }
}

Evidence::Evidence(std::initializer_list<std::pair<const std::string, std::string>> init) {
    for (const auto& [variable, outcome] : init) {
        set(variable, outcome);
    }
}

void Evidence::set(const std::string& variable, const std::string& outcome) {
    auto [it, inserted] = assignments_.emplace(variable, outcome);
    if (!inserted) {
        throw ValidationError("evidence assigns variable '" + variable + "' more than once");
    }
}

bool Evidence::contains(std::string_view variable) const {
    return assignments_.find(std::string(variable)) != assignments_.end();
}

AmplitudeNetwork::AmplitudeNetwork(std::vector<Variable> variables,
                                   std::vector<AmplitudeCpt> cpts)
    : variables_(std::move(variables)), cpt_storage_(std::move(cpts)) {
    if (variables_.empty()) {
        throw ValidationError("network needs at least one variable");
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const Variable& v = variables_[i];
        if (v.arity() < 2) {
            throw ValidationError("variable '" + v.name + "' needs at least two outcomes");
        }
        std::set<std::string_view> labels(v.outcomes.begin(), v.outcomes.end());
        if (labels.size() != v.outcomes.size()) {
            throw ValidationError("variable '" + v.name + "' has duplicate outcome labels");
        }
        if (!index_.emplace(v.name, i).second) {
            throw ValidationError("duplicate variable name '" + v.name + "'");
        }
    }

    // attach CPTs to variables and resolve parent names
    cpts_.assign(variables_.size(), nullptr);
    parent_indices_.resize(variables_.size());
    for (const AmplitudeCpt& cpt : cpt_storage_) {
        std::size_t v = index_of(cpt.variable());
        if (cpts_[v] != nullptr) {
            throw ValidationError("variable '" + cpt.variable() + "' has more than one CPT");
        }
        cpts_[v] = &cpt;
        for (const std::string& parent : cpt.parents()) {
            if (!contains(parent)) {
                throw ValidationError("CPT for '" + cpt.variable() + "' references unknown parent '" +
                                      parent + "'");
            }
            parent_indices_[v].push_back(index_of(parent));
        }
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (cpts_[i] == nullptr) {
            throw ValidationError("variable '" + variables_[i].name + "' has no CPT");
        }
    }

    // the parent relation must be acyclic (Kahn's algorithm)
    std::vector<std::size_t> unresolved_parents(variables_.size());
    std::vector<std::vector<std::size_t>> children(variables_.size());
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        unresolved_parents[i] = parent_indices_[i].size();
        for (std::size_t p : parent_indices_[i]) {
            children[p].push_back(i);
        }
        if (unresolved_parents[i] == 0) {
            ready.push_back(i);
        }
    }
    std::size_t resolved = 0;
    while (!ready.empty()) {
        std::size_t v = ready.back();
        ready.pop_back();
        ++resolved;
        for (std::size_t c : children[v]) {
            if (--unresolved_parents[c] == 0) {
                ready.push_back(c);
            }
        }
    }
    if (resolved != variables_.size()) {
        throw ValidationError("parent relation contains a cycle");
    }

    // full Cartesian coverage and Born normalization per row
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const AmplitudeCpt& cpt = *cpts_[i];
        std::size_t expected_rows = 1;
        for (std::size_t p : parent_indices_[i]) {
            expected_rows *= variables_[p].arity();
        }
        if (cpt.rows().size() != expected_rows) {
            throw ValidationError("CPT for '" + variables_[i].name + "' has " +
                                  std::to_string(cpt.rows().size()) + " rows, expected " +
                                  std::to_string(expected_rows));
        }
        for (const auto& row : cpt.rows()) {
            if (row.size() != variables_[i].arity()) {
                throw ValidationError("CPT row width mismatch for '" + variables_[i].name + "'");
            }
            double total = 0.0;
            for (const Amplitude& a : row) {
                total += born_probability(a);
            }
            if (std::abs(total - 1.0) > kRowNormalizationTolerance) {
                throw ValidationError("CPT row for '" + variables_[i].name +
                                      "' is not Born-normalized (sum of squared magnitudes = " +
                                      std::to_string(total) + ")");
            }
        }
    }
}

const Variable& AmplitudeNetwork::variable(std::string_view name) const {
    return variables_[index_of(name)];
}

std::size_t AmplitudeNetwork::index_of(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
        throw ValidationError("unknown variable '" + std::string(name) + "'");
    }
    return it->second;
}

bool AmplitudeNetwork::contains(std::string_view name) const {
    return index_.find(name) != index_.end();
}

const Amplitude& AmplitudeNetwork::amplitude(
    std::size_t index, const std::vector<std::size_t>& full_assignment) const {
    const AmplitudeCpt& cpt = *cpts_[index];
    std::size_t row = 0;
    for (std::size_t p : parent_indices_[index]) {
        row = row * variables_[p].arity() + full_assignment[p];
    }
    return cpt.rows()[row][full_assignment[index]];
}

}  // namespace qlid
