#include "portarb/compiler.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace portarb
{

BoolExpr SelectionRule::guard() const
{
  std::vector<BoolExpr> parts{BoolExpr::literal(candidate)};
  if (constraint.kind() == BoolExpr::Kind::And) {
    parts.insert(parts.end(), constraint.children().begin(), constraint.children().end());
  } else if (!constraint.is_true()) {
    parts.push_back(constraint);
  }
  return parts.size() == 1 ? parts.front() : BoolExpr::conjunction(std::move(parts));
}

std::string SelectionRule::text() const
{
  return render(guard()) + " => Select(" + candidate.str() + ")";
}

const SelectionRule* RuleSet::find(const PortName& port, const PortName& candidate) const
{
  for (const auto& r : rules)
    if (r.port == port && r.candidate == candidate)
      return &r;
  return nullptr;
}

std::vector<const SelectionRule*> RuleSet::at(const PortName& port) const
{
  std::vector<const SelectionRule*> out;
  for (const auto& r : rules)
    if (r.port == port)
      out.push_back(&r);
  return out;
}

BoolExpr inherited_condition(const Hierarchy& hierarchy, const BehaviorNode& behavior)
{
  std::vector<BoolExpr> parts;
  const auto ancestors = hierarchy.ancestors(behavior.name);
  for (auto it = ancestors.rbegin(); it != ancestors.rend(); ++it)
    parts.push_back((*it)->condition);
  parts.push_back(behavior.condition);
  return normalize(BoolExpr::conjunction(std::move(parts)));
}

std::vector<PortName> effective_inhibitor_sources(const Hierarchy& hierarchy,
                                                  const BehaviorNode& behavior)
{
  std::vector<PortName> out;
  std::vector<const BehaviorNode*> levels{&behavior};
  const auto ancestors = hierarchy.ancestors(behavior.name);
  levels.insert(levels.end(), ancestors.begin(), ancestors.end());

  for (const BehaviorNode* inhibited : levels) {
    for (const BehaviorNode* sibling : hierarchy.siblings(inhibited->name)) {
      const auto& names = sibling->inhibitions;
      if (std::find(names.begin(), names.end(), inhibited->name) == names.end())
        continue;
      for (const BehaviorNode* leaf : Hierarchy::leaves(*sibling)) {
        for (const auto& c : leaf->configuration) {
          if (std::find(out.begin(), out.end(), c.source) == out.end())
            out.push_back(c.source);
        }
      }
    }
  }
  return out;
}

RuleSet extract_rules(const BehaviorModel& model, const NetworkDescription& network)
{
  const Hierarchy hierarchy(model);
  RuleSet set;
  std::map<std::pair<PortName, PortName>, size_t> index;

  for (const BehaviorNode* leaf : hierarchy.all_leaves()) {
    // Inhibitor literals precede the inherited condition.
    std::vector<BoolExpr> parts;
    for (const auto& p : effective_inhibitor_sources(hierarchy, *leaf))
      parts.push_back(BoolExpr::negation(BoolExpr::literal(p)));
    parts.push_back(inherited_condition(hierarchy, *leaf));
    const BoolExpr base = normalize(BoolExpr::conjunction(std::move(parts)));

    for (const auto& conn : leaf->configuration) {
      if (!network.has_connection(conn))
        throw std::logic_error("extract_rules: behavior '" + leaf->name +
                               "' uses a connection missing from the network: " + conn.str());
      // The candidate's own activation is implied by the arrival being judged.
      BoolExpr constraint = substitute(base, conn.source, true);
      const auto key = std::make_pair(conn.destination, conn.source);
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, set.rules.size());
        set.rules.push_back({conn.destination, conn.source, std::move(constraint), {leaf->name}});
      } else {
        SelectionRule& rule = set.rules[it->second];
        rule.constraint = normalize(BoolExpr::disjunction({rule.constraint, constraint}));
        if (std::find(rule.provenance.begin(), rule.provenance.end(), leaf->name) ==
            rule.provenance.end())
          rule.provenance.push_back(leaf->name);
      }
    }
  }

  std::stable_sort(set.rules.begin(), set.rules.end(),
                   [](const SelectionRule& a, const SelectionRule& b) {
                     return std::tie(a.port, a.candidate) < std::tie(b.port, b.candidate);
                   });
  return set;
}

std::vector<Diagnostic> check_conflicts(const RuleSet& rules, BddManager& bdd)
{
  std::vector<Diagnostic> out;
  std::vector<NodeRef> guards;
  guards.reserve(rules.rules.size());
  for (const auto& r : rules.rules)
    guards.push_back(bdd.build(r.guard()));

  for (size_t i = 0; i < rules.rules.size(); ++i) {
    const SelectionRule& a = rules.rules[i];
    if (!bdd.satisfiable(guards[i])) {
      out.push_back({Severity::Warning, "DEAD_RULE",
                     "rule for " + a.candidate.str() + " can never select: " + a.text(),
                     a.port.str()});
    }
    for (size_t j = i + 1; j < rules.rules.size() && rules.rules[j].port == a.port; ++j) {
      const SelectionRule& b = rules.rules[j];
      const NodeRef both = bdd.combine(BddOp::And, guards[i], guards[j]);
      if (!bdd.satisfiable(both))
        continue;
      const auto witness = *bdd.min_satisfying(both);
      std::vector<PortName> shown = literals(a.guard());
      for (const auto& p : literals(b.guard()))
        if (std::find(shown.begin(), shown.end(), p) == shown.end())
          shown.push_back(p);
      std::sort(shown.begin(), shown.end(), [&](const PortName& x, const PortName& y) {
        return *bdd.variable_index(x) < *bdd.variable_index(y);
      });
      std::string w;
      for (const auto& p : shown) {
        if (!w.empty())
          w += ' ';
        w += p.str() + "=" + (witness.at(p) ? "1" : "0");
      }
      out.push_back({Severity::Warning, "CONFLICT",
                     "rules for " + a.candidate.str() + " and " + b.candidate.str() +
                         " can both select; witness: " + w,
                     a.port.str()});
    }
  }
  return out;
}

std::string emit_rules(const RuleSet& rules, RuleFormat format)
{
  if (format == RuleFormat::Text) {
    std::string out;
    for (const auto& r : rules.rules)
      out += r.text() + " @ " + r.port.str() + "\n";
    return out;
  }
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& r : rules.rules) {
    nlohmann::ordered_json item;
    item["port"] = r.port.str();
    item["candidate"] = r.candidate.str();
    item["constraint"] = render(r.constraint);
    item["provenance"] = r.provenance;
    list.push_back(std::move(item));
  }
  nlohmann::ordered_json doc;
  doc["rules"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace portarb
