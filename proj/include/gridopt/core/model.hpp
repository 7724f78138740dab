#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gridopt/core/error.hpp"
#include "gridopt/core/expression.hpp"

namespace gridopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Integrality { Continuous, Integer };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  Integrality integrality = Integrality::Continuous;
};

struct Constraint {
  std::string name;
  LinearExpression expression;  // constant-free: constants are folded into rhs
  Sense sense = Sense::Equal;
  double rhs = 0.0;
};

// Lifecycle of a model build. Callbacks of every module run phase by phase.
enum class Phase {
  DefineArguments,
  LoadInputs,
  DefineComponents,
  DefineDynamicComponents,
  Assembled,
};

enum class ComponentKind {
  CostPerPeriod,     // annual $ in each period, indexed [period]
  CostPerTimepoint,  // $/h in each timepoint, indexed [timepoint]
  Injection,         // MW into a zone, indexed [zone, timepoint]
  Withdrawal,        // MW out of a zone, indexed [zone, timepoint]
  ReserveProvision,  // upward spinning reserve MW, indexed [area, timepoint]
  ReserveRequirement,
};

using IndexKey = std::vector<std::string>;
// A named family of expressions over an index set. Missing keys read as zero.
using ExpressionFamily = std::map<IndexKey, LinearExpression>;

// Renders "Component[i1,i2,...]".
inline std::string indexed_name(std::string_view component, const IndexKey& index) {
  std::string out(component);
  if (index.empty()) return out;
  out += '[';
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i) out += ',';
    out += index[i];
  }
  out += ']';
  return out;
}

// Ordered, duplicate-free lists of component names per kind. Modules add
// names while defining components; dynamic assembly reads them.
class Registry {
 public:
  void add(ComponentKind kind, const std::string& name) {
    auto& list = lists_[kind];
    if (std::find(list.begin(), list.end(), name) != list.end()) {
      fail(ErrorKind::Duplicate, "component '" + name + "' already registered");
    }
    list.push_back(name);
  }

  const std::vector<std::string>& names(ComponentKind kind) const {
    static const std::vector<std::string> empty;
    auto it = lists_.find(kind);
    return it == lists_.end() ? empty : it->second;
  }

 private:
  std::map<ComponentKind, std::vector<std::string>> lists_;
};

// Variables, constraints, named expression families, registries and the
// objective of one optimization model. Immutable once assembled.
class ModelGraph {
 public:
  Phase phase() const { return phase_; }

  void advance_to(Phase next) {
    if (next < phase_) fail(ErrorKind::PhaseViolation, "model phases only move forward");
    phase_ = next;
  }

  VarId add_variable(const std::string& name, double lower = 0.0, double upper = kInf,
                     Integrality integrality = Integrality::Continuous) {
    require_mutable("add variable " + name);
    if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInf ||
        upper == -kInf) {
      fail(ErrorKind::InputError, "invalid bounds for variable " + name);
    }
    if (var_index_.contains(name)) fail(ErrorKind::Duplicate, "variable " + name);
    VarId id{static_cast<std::int32_t>(variables_.size())};
    variables_.push_back({name, lower, upper, integrality});
    var_index_.emplace(name, id);
    return id;
  }

  VarId add_variable(std::string_view component, const IndexKey& index, double lower = 0.0,
                     double upper = kInf, Integrality integrality = Integrality::Continuous) {
    return add_variable(indexed_name(component, index), lower, upper, integrality);
  }

  void set_integrality(VarId id, Integrality integrality) {
    require_mutable("change integrality");
    variables_.at(static_cast<std::size_t>(id.index)).integrality = integrality;
  }

  std::size_t add_constraint(const std::string& name, const LinearExpression& expr, Sense sense,
                             double rhs) {
    require_mutable("add constraint " + name);
    check_finite(rhs, "constraint rhs");
    if (constraint_index_.contains(name)) fail(ErrorKind::Duplicate, "constraint " + name);
    double folded = rhs - expr.constant();
    LinearExpression body(std::vector<Term>(expr.terms().begin(), expr.terms().end()), 0.0);
    constraints_.push_back({name, std::move(body), sense, folded});
    constraint_index_.emplace(name, constraints_.size() - 1);
    return constraints_.size() - 1;
  }

  std::size_t add_constraint(std::string_view component, const IndexKey& index,
                             const LinearExpression& expr, Sense sense, double rhs) {
    return add_constraint(indexed_name(component, index), expr, sense, rhs);
  }

  // lhs (sense) rhs, both expressions.
  std::size_t add_constraint(std::string_view component, const IndexKey& index,
                             const LinearExpression& lhs, Sense sense,
                             const LinearExpression& rhs) {
    return add_constraint(indexed_name(component, index), lhs - rhs, sense, 0.0);
  }

  void register_component(ComponentKind kind, const std::string& name) {
    if (phase_ != Phase::DefineComponents) {
      fail(ErrorKind::PhaseViolation,
           "component '" + name + "' registered outside define_components");
    }
    registry_.add(kind, name);
  }

  void define_family(const std::string& name, ExpressionFamily family) {
    require_mutable("define family " + name);
    if (families_.contains(name)) fail(ErrorKind::Duplicate, "expression family " + name);
    families_.emplace(name, std::move(family));
  }

  bool has_family(const std::string& name) const { return families_.contains(name); }

  const ExpressionFamily& family(const std::string& name) const {
    auto it = families_.find(name);
    if (it == families_.end()) {
      fail(ErrorKind::UnresolvedRegistryEntry, "expression family '" + name + "' is not defined");
    }
    return it->second;
  }

  // Entry of a family, zero when the index is absent.
  LinearExpression family_value(const std::string& name, const IndexKey& index) const {
    const auto& fam = family(name);
    auto it = fam.find(index);
    return it == fam.end() ? LinearExpression{} : it->second;
  }

  void set_objective(LinearExpression objective) {
    require_mutable("set objective");
    objective_ = std::move(objective);
  }

  const Registry& registry() const { return registry_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearExpression& objective() const { return objective_; }
  const std::map<std::string, ExpressionFamily>& families() const { return families_; }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  const Variable& variable(VarId id) const { return variables_.at(static_cast<std::size_t>(id.index)); }

  VarId find_variable(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? VarId{} : it->second;
  }

  VarId variable_id(std::string_view component, const IndexKey& index) const {
    auto id = find_variable(indexed_name(component, index));
    if (!id.valid()) {
      fail(ErrorKind::UnresolvedRegistryEntry,
           "variable " + indexed_name(component, index) + " is not defined");
    }
    return id;
  }

  const Constraint* find_constraint(const std::string& name) const {
    auto it = constraint_index_.find(name);
    return it == constraint_index_.end() ? nullptr : &constraints_[it->second];
  }

  std::size_t constraint_position(const std::string& name) const {
    auto it = constraint_index_.find(name);
    if (it == constraint_index_.end()) fail(ErrorKind::UnresolvedRegistryEntry, "constraint " + name);
    return it->second;
  }

  bool has_integers() const {
    return std::any_of(variables_.begin(), variables_.end(),
                       [](const Variable& v) { return v.integrality == Integrality::Integer; });
  }

 private:
  void require_mutable(const std::string& what) const {
    if (phase_ == Phase::Assembled) {
      fail(ErrorKind::PhaseViolation, "cannot " + what + " after assembly");
    }
  }

  Phase phase_ = Phase::DefineArguments;
  std::vector<Variable> variables_;
  std::unordered_map<std::string, VarId> var_index_;
  std::vector<Constraint> constraints_;
  std::unordered_map<std::string, std::size_t> constraint_index_;
  std::map<std::string, ExpressionFamily> families_;
  Registry registry_;
  LinearExpression objective_;
};

}  // namespace gridopt
