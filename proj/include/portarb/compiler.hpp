#ifndef PORTARB_COMPILER_HPP_
#define PORTARB_COMPILER_HPP_

#include <string>
#include <vector>

#include "portarb/bdd.hpp"
#include "portarb/bool_expr.hpp"
#include "portarb/model.hpp"

namespace portarb
{

/// `candidate active ∧ constraint ⇒ Select(candidate)` at `port`.
struct SelectionRule
{
  PortName port;
  PortName candidate;
  BoolExpr constraint;
  /// Behaviors whose configuration produced this rule, in extraction order.
  std::vector<std::string> provenance;

  /// The candidate literal conjoined with the constraint, e.g.
  /// `/Object/pos:o and not /collision:o`.
  BoolExpr guard() const;

  /// `/Object/pos:o and not /collision:o => Select(/Object/pos:o)`
  std::string text() const;
};

/// Rules sorted by (port, candidate); at most one rule per pair.
struct RuleSet
{
  std::vector<SelectionRule> rules;

  const SelectionRule* find(const PortName& port, const PortName& candidate) const;
  std::vector<const SelectionRule*> at(const PortName& port) const;
  bool empty() const { return rules.empty(); }
};

/// Conditions of every ancestor meta-behavior, outermost first, followed by
/// the behavior's own condition; normalized.
BoolExpr inherited_condition(const Hierarchy& hierarchy, const BehaviorNode& behavior);

/// Source ports of every leaf behavior that inhibits `behavior` or one of its
/// ancestors. Inhibitors of the behavior itself come first, then those of its
/// parent, and so on; duplicates are dropped.
std::vector<PortName> effective_inhibitor_sources(const Hierarchy& hierarchy,
                                                  const BehaviorNode& behavior);

/// Two-step extraction: for every leaf behavior and every connection (s, d)
/// of its configuration, a rule at d for s guarded by the negation of every
/// inhibitor source followed by the inherited condition. Rules for the same (d, s) are
/// merged by disjunction. Expects a model that validated without errors
/// against `network`; throws std::logic_error if a configured connection is
/// missing from it.
RuleSet extract_rules(const BehaviorModel& model, const NetworkDescription& network);

/// Warns for every same-port pair of rules that can both select at once, and
/// for rules that can never select.
std::vector<Diagnostic> check_conflicts(const RuleSet& rules, BddManager& bdd);

enum class RuleFormat { Text, Json };

std::string emit_rules(const RuleSet& rules, RuleFormat format);

}  // namespace portarb

#endif  // PORTARB_COMPILER_HPP_
