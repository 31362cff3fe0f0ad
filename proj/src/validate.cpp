#include "portarb/validate.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <map>
#include <set>

#include "portarb/compiler.hpp"

namespace portarb
{

namespace
{

Diagnostic error(std::string code, std::string location, std::string message)
{
  return {Severity::Error, std::move(code), std::move(message), std::move(location)};
}

void visit_all(const std::vector<BehaviorNode>& nodes,
               const std::function<void(const BehaviorNode&)>& fn)
{
  for (const auto& n : nodes) {
    fn(n);
    visit_all(n.children, fn);
  }
}

// Reports each strongly connected component of the sibling inhibition graph
// that contains a cycle, once, at its lexicographically smallest member.
void check_cycles(const std::vector<const BehaviorNode*>& group, const Hierarchy& hierarchy,
                  std::vector<Diagnostic>& out)
{
  std::map<std::string, std::set<std::string>> edges;
  for (const BehaviorNode* n : group) {
    for (const auto& target : n->inhibitions) {
      if (target == n->name) {
        edges[n->name].insert(target);
        continue;
      }
      if (hierarchy.find(target) != nullptr && hierarchy.parent(target) == hierarchy.parent(n->name))
        edges[n->name].insert(target);
    }
  }
  auto reachable = [&](const std::string& from) {
    std::set<std::string> seen;
    std::vector<std::string> stack(edges[from].begin(), edges[from].end());
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second)
        continue;
      for (const auto& nxt : edges[cur])
        stack.push_back(nxt);
    }
    return seen;
  };
  std::map<std::string, std::set<std::string>> reach;
  for (const BehaviorNode* n : group)
    reach[n->name] = reachable(n->name);

  std::set<std::string> reported;
  for (const auto& [name, r] : reach) {
    if (!r.count(name) || reported.count(name))
      continue;
    std::set<std::string> component;
    for (const auto& other : r)
      if (reach[other].count(name))
        component.insert(other);
    reported.insert(component.begin(), component.end());
    std::string members;
    for (const auto& m : component)
      members += (members.empty() ? "" : ", ") + m;
    out.push_back(error("V4", *component.begin(), "inhibition cycle among {" + members + "}"));
  }
}

}  // namespace

bool Validation::has_errors() const
{
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.is_error(); });
}

bool Validation::has_warnings() const
{
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return !d.is_error(); });
}

Validation validate(const BehaviorModel& model, const NetworkDescription& network,
                    bool auto_observe)
{
  Validation result{{}, network};
  auto& out = result.diagnostics;
  const Hierarchy hierarchy(model);

  // V5, V1
  visit_all(model.roots, [&](const BehaviorNode& n) {
    for (const auto& target : n.inhibitions) {
      if (target == n.name)
        continue;  // self-inhibition is a V4 cycle
      if (hierarchy.find(target) == nullptr) {
        out.push_back(error("V5", n.name, "inhibits unknown behavior '" + target + "'"));
      } else if (hierarchy.parent(target) != hierarchy.parent(n.name)) {
        const BehaviorNode* p = hierarchy.parent(n.name);
        const BehaviorNode* q = hierarchy.parent(target);
        out.push_back(error("V1", n.name,
                            "inhibits '" + target + "' outside its own group ('" +
                                (p ? p->name : std::string("<top level>")) + "' vs '" +
                                (q ? q->name : std::string("<top level>")) + "')"));
      }
    }
  });

  // V4
  {
    std::vector<const BehaviorNode*> top;
    for (const auto& r : model.roots)
      top.push_back(&r);
    check_cycles(top, hierarchy, out);
    visit_all(model.roots, [&](const BehaviorNode& n) {
      if (n.children.empty())
        return;
      std::vector<const BehaviorNode*> group;
      for (const auto& c : n.children)
        group.push_back(&c);
      check_cycles(group, hierarchy, out);
    });
  }

  // V2, V3
  for (const BehaviorNode* leaf : hierarchy.all_leaves()) {
    for (const auto& c : leaf->configuration) {
      if (!network.has_connection(c))
        out.push_back(error("V2", leaf->name, "configured connection " + c.str() +
                                                  " does not exist in the network"));
    }

    std::vector<std::pair<PortName, const char*>> needed;
    for (const auto& p : literals(inherited_condition(hierarchy, *leaf)))
      needed.emplace_back(p, "condition literal");
    for (const auto& p : effective_inhibitor_sources(hierarchy, *leaf))
      if (std::none_of(needed.begin(), needed.end(), [&](const auto& e) { return e.first == p; }))
        needed.emplace_back(p, "inhibitor source");

    std::vector<PortName> destinations;
    for (const auto& c : leaf->configuration)
      if (std::find(destinations.begin(), destinations.end(), c.destination) == destinations.end())
        destinations.push_back(c.destination);

    for (const auto& dest : destinations) {
      for (const auto& [port, what] : needed) {
        const Connection observer{port, dest};
        if (result.network.has_connection(observer))
          continue;
        const std::string base = std::string(what) + " " + port.str() +
                                 " is not observable at " + dest.str();
        if (!auto_observe) {
          out.push_back(error("V3", leaf->name, base + " (no connection " + observer.str() + ")"));
        } else if (!result.network.declares_output(port)) {
          out.push_back(error("V3", leaf->name,
                              base + " and no module declares output " + port.str()));
        } else {
          result.network.connections.push_back(observer);
          out.push_back({Severity::Warning, "V3",
                         base + "; added observer connection " + observer.str(), leaf->name});
        }
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.location, a.code) < std::tie(b.location, b.code);
  });
  return result;
}

}  // namespace portarb
