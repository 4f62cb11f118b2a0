#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qlid/amplitude.hpp"

namespace qlid {

// A discrete random variable: a name plus an ordered outcome list. The
// outcome order is load-bearing: it fixes CPT row/column layout and the
// enumeration order of joint configurations.
struct Variable {
    std::string name;
    std::vector<std::string> outcomes;

    std::size_t arity() const { return outcomes.size(); }
    std::size_t outcome_index(std::string_view label) const;  // throws on unknown label
};

// Conditional amplitude table for one variable. Rows are indexed by the
// parent assignment in mixed radix (first parent most significant, outcomes
// in declared order); each row holds one amplitude per outcome of the
// variable and must be Born-normalized: sum of squared magnitudes == 1.
class AmplitudeCpt {
public:
    AmplitudeCpt(std::string variable, std::vector<std::string> parents,
                 std::vector<std::vector<Amplitude>> rows);

    const std::string& variable() const { return variable_; }
    const std::vector<std::string>& parents() const { return parents_; }
    const std::vector<std::vector<Amplitude>>& rows() const { return rows_; }

private:
    std::string variable_;
    std::vector<std::string> parents_;
    std::vector<std::vector<Amplitude>> rows_;
};

// Observed outcomes for a subset of variables. A variable may be assigned at
// most once; names and outcomes are checked against the network at use.
class Evidence {
public:
    Evidence() = default;
    Evidence(std::initializer_list<std::pair<const std::string, std::string>> init);

    void set(const std::string& variable, const std::string& outcome);
    bool contains(std::string_view variable) const;
    bool empty() const { return assignments_.empty(); }
    const std::map<std::string, std::string>& assignments() const { return assignments_; }

private:
    std::map<std::string, std::string> assignments_;
};

// The quantum-like Bayesian network: a DAG of variables with one amplitude
// CPT each. Construction validates the whole model (unique names, acyclic
// parent relation, full CPT coverage, per-row Born normalization) and the
// network is immutable afterwards, so inference can run concurrently.
class AmplitudeNetwork {
public:
    AmplitudeNetwork(std::vector<Variable> variables, std::vector<AmplitudeCpt> cpts);

    std::size_t size() const { return variables_.size(); }
    const std::vector<Variable>& variables() const { return variables_; }
    const Variable& variable(std::size_t index) const { return variables_[index]; }
    const Variable& variable(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;  // throws on unknown variable
    bool contains(std::string_view name) const;

    // CPT and parent indices for the variable at `index` (aligned with
    // declaration order, independent of the order CPTs were supplied in).
    const AmplitudeCpt& cpt(std::size_t index) const { return *cpts_[index]; }
    const std::vector<std::size_t>& parent_indices(std::size_t index) const {
        return parent_indices_[index];
    }

    // CPT entry selected by a full outcome-index assignment (one outcome
    // index per variable, in declaration order).
    const Amplitude& amplitude(std::size_t index,
                               const std::vector<std::size_t>& full_assignment) const;

private:
    std::vector<Variable> variables_;
    std::vector<AmplitudeCpt> cpt_storage_;
    std::vector<const AmplitudeCpt*> cpts_;                  // per variable
    std::vector<std::vector<std::size_t>> parent_indices_;   // per variable
    std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace qlid
