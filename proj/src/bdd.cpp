#include "portarb/bdd.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

namespace portarb
{

namespace
{

uint64_t pair_key(NodeRef a, NodeRef b)
{
  return (static_cast<uint64_t>(a.id) << 32) | b.id;
}

}  // namespace

size_t BddManager::NodeKeyHash::operator()(const NodeKey& k) const noexcept
{
  size_t h = std::hash<uint32_t>{}(k.level);
  h = h * 0x9E3779B97F4A7C15ULL + k.low;
  h = h * 0x9E3779B97F4A7C15ULL + k.high;
  return h ^ (h >> 29);
}

BddManager::BddManager()
{
  nodes_.push_back({kTerminalLevel, 0, 0});  // false
  nodes_.push_back({kTerminalLevel, 1, 1});  // true
}

NodeRef BddManager::make_node(uint32_t level, NodeRef low, NodeRef high)
{
  if (low == high)
    return low;
  const NodeKey key{level, low.id, high.id};
  if (auto it = unique_.find(key); it != unique_.end())
    return {it->second};
  const auto id = static_cast<uint32_t>(nodes_.size());
  nodes_.push_back({level, low.id, high.id});
  unique_.emplace(key, id);
  return {id};
}

NodeRef BddManager::var(const PortName& port)
{
  auto it = level_of_.find(port);
  uint32_t level;
  if (it == level_of_.end()) {
    level = static_cast<uint32_t>(order_.size());
    order_.push_back(port);
    level_of_.emplace(port, level);
  } else {
    level = it->second;
  }
  return make_node(level, kFalseNode, kTrueNode);
}

std::optional<size_t> BddManager::variable_index(const PortName& port) const
{
  auto it = level_of_.find(port);
  if (it == level_of_.end())
    return std::nullopt;
  return it->second;
}

NodeRef BddManager::apply(BddOp op, NodeRef a, NodeRef b)
{
  if (op == BddOp::And) {
    if (a == kFalseNode || b == kFalseNode)
      return kFalseNode;
    if (a == kTrueNode)
      return b;
    if (b == kTrueNode || a == b)
      return a;
  } else {
    if (a == kTrueNode || b == kTrueNode)
      return kTrueNode;
    if (a == kFalseNode)
      return b;
    if (b == kFalseNode || a == b)
      return a;
  }
  if (b < a)
    std::swap(a, b);

  auto& cache = cache_[op == BddOp::And ? kAnd : kOr];
  const uint64_t key = pair_key(a, b);
  if (cache_enabled_) {
    if (auto it = cache.find(key); it != cache.end())
      return {it->second};
  }

  const uint32_t la = top_level(a);
  const uint32_t lb = top_level(b);
  const uint32_t top = std::min(la, lb);
  const NodeRef a_low = la == top ? low(a) : a;
  const NodeRef a_high = la == top ? high(a) : a;
  const NodeRef b_low = lb == top ? low(b) : b;
  const NodeRef b_high = lb == top ? high(b) : b;

  const NodeRef lo = apply(op, a_low, b_low);
  const NodeRef hi = apply(op, a_high, b_high);
  const NodeRef result = make_node(top, lo, hi);
  if (cache_enabled_)
    cache.emplace(key, result.id);
  return result;
}

NodeRef BddManager::combine(BddOp op, NodeRef a, NodeRef b) { return apply(op, a, b); }

NodeRef BddManager::negate(NodeRef a)
{
  if (a == kFalseNode)
    return kTrueNode;
  if (a == kTrueNode)
    return kFalseNode;
  auto& cache = cache_[kNot];
  if (cache_enabled_) {
    if (auto it = cache.find(a.id); it != cache.end())
      return {it->second};
  }
  const NodeRef lo = negate(low(a));
  const NodeRef hi = negate(high(a));
  const NodeRef result = make_node(top_level(a), lo, hi);
  if (cache_enabled_)
    cache.emplace(a.id, result.id);
  return result;
}

NodeRef BddManager::build(const BoolExpr& expr)
{
  using K = BoolExpr::Kind;
  switch (expr.kind()) {
    case K::True:
      return kTrueNode;
    case K::False:
      return kFalseNode;
    case K::Literal:
      return var(expr.port());
    case K::Not:
      return negate(build(expr.children().front()));
    case K::And:
    case K::Or: {
      const BddOp op = expr.kind() == K::And ? BddOp::And : BddOp::Or;
      NodeRef acc = op == BddOp::And ? kTrueNode : kFalseNode;
      for (const auto& c : expr.children())
        acc = combine(op, acc, build(c));
      return acc;
    }
  }
  return kFalseNode;
}

bool BddManager::evaluate(NodeRef node, const std::map<PortName, bool>& assignment) const
{
  while (!is_terminal(node)) {
    const auto it = assignment.find(order_[level(node)]);
    const bool value = it != assignment.end() && it->second;
    node = value ? high(node) : low(node);
  }
  return node == kTrueNode;
}

std::optional<std::map<PortName, bool>> BddManager::min_satisfying(NodeRef node) const
{
  if (node == kFalseNode)
    return std::nullopt;
  std::map<PortName, bool> out;
  for (const auto& p : order_)
    out[p] = false;
  // Any non-false node has a path to true; prefer the low edge at each step.
  while (!is_terminal(node)) {
    if (low(node) != kFalseNode) {
      node = low(node);
    } else {
      out[order_[level(node)]] = true;
      node = high(node);
    }
  }
  return out;
}

void BddManager::set_cache_enabled(bool enabled)
{
  cache_enabled_ = enabled;
  if (!enabled)
    for (auto& c : cache_)
      c.clear();
}

bool BddManager::check_invariants() const
{
  std::set<std::tuple<uint32_t, uint32_t, uint32_t>> seen;
  for (size_t id = 2; id < nodes_.size(); ++id) {
    const Node& n = nodes_[id];
    if (n.low == n.high)
      return false;
    if (n.level >= order_.size())
      return false;
    if (nodes_[n.low].level <= n.level || nodes_[n.high].level <= n.level)
      return false;
    if (!seen.emplace(n.level, n.low, n.high).second)
      return false;
  }
  return true;
}

std::string BddManager::to_dot(NodeRef node, const std::string& graph_name) const
{
  std::ostringstream out;
  out << "digraph \"" << graph_name << "\" {\n";
  out << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
  std::set<uint32_t> visited;
  std::vector<uint32_t> stack{node.id};
  std::vector<uint32_t> inner;
  while (!stack.empty()) {
    const uint32_t id = stack.back();
    stack.pop_back();
    if (id < 2 || !visited.insert(id).second)
      continue;
    inner.push_back(id);
    stack.push_back(nodes_[id].high);
    stack.push_back(nodes_[id].low);
  }
  for (uint32_t id : inner) {
    const Node& n = nodes_[id];
    out << "  n" << id << " [label=\"" << order_[n.level].str() << "\"];\n";
    out << "  n" << id << " -> n" << n.low << " [style=dashed];\n";
    out << "  n" << id << " -> n" << n.high << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace portarb
