#ifndef PORTARB_BDD_HPP_
#define PORTARB_BDD_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "portarb/bool_expr.hpp"
#include "portarb/port.hpp"

namespace portarb
{

/// Handle to a node owned by a BddManager. Two handles from the same manager
/// are equal iff they denote the same boolean function.
struct NodeRef
{
  uint32_t id = 0;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

inline constexpr NodeRef kFalseNode{0};
inline constexpr NodeRef kTrueNode{1};

enum class BddOp { And, Or };

/// Reduced ordered BDD store with a unique table and a memoized apply.
///
/// Variables are source ports; the order is the order in which ports are first
/// passed to var(). There is no reordering, no complement edges, and nodes are
/// never freed.
class BddManager
{
public:
  BddManager();

  NodeRef var(const PortName& port);
  NodeRef combine(BddOp op, NodeRef a, NodeRef b);
  NodeRef negate(NodeRef a);
  NodeRef build(const BoolExpr& expr);

  /// Ports absent from `assignment` read as false.
  bool evaluate(NodeRef node, const std::map<PortName, bool>& assignment) const;

  bool satisfiable(NodeRef node) const { return node != kFalseNode; }

  /// Lexicographically least satisfying assignment over the variable order
  /// (false before true), covering every variable; nullopt if unsatisfiable.
  std::optional<std::map<PortName, bool>> min_satisfying(NodeRef node) const;

  const std::vector<PortName>& variable_order() const { return order_; }
  std::optional<size_t> variable_index(const PortName& port) const;

  /// Stored nodes, including the two terminals.
  size_t node_count() const { return nodes_.size(); }

  bool is_terminal(NodeRef n) const { return n.id < 2; }
  size_t level(NodeRef n) const { return nodes_[n.id].level; }
  NodeRef low(NodeRef n) const { return {nodes_[n.id].low}; }
  NodeRef high(NodeRef n) const { return {nodes_[n.id].high}; }

  /// Disabling the operation cache changes performance only, never results.
  void set_cache_enabled(bool enabled);

  /// Checks canonicity, reduction and ordering over every stored node.
  bool check_invariants() const;

  /// Graphviz rendering of the sub-diagram rooted at `node`.
  std::string to_dot(NodeRef node, const std::string& graph_name = "bdd") const;

private:
  static constexpr uint32_t kTerminalLevel = UINT32_MAX;

  struct Node
  {
    uint32_t level;
    uint32_t low;
    uint32_t high;
  };

  struct NodeKey
  {
    uint32_t level, low, high;
    bool operator==(const NodeKey&) const = default;
  };

  struct NodeKeyHash
  {
    size_t operator()(const NodeKey& k) const noexcept;
  };

  enum CacheSlot { kAnd = 0, kOr = 1, kNot = 2 };

  NodeRef make_node(uint32_t level, NodeRef low, NodeRef high);
  NodeRef apply(BddOp op, NodeRef a, NodeRef b);
  uint32_t top_level(NodeRef a) const { return nodes_[a.id].level; }

  std::vector<PortName> order_;
  std::unordered_map<PortName, uint32_t> level_of_;
  std::vector<Node> nodes_;
  std::unordered_map<NodeKey, uint32_t, NodeKeyHash> unique_;
  std::array<std::unordered_map<uint64_t, uint32_t>, 3> cache_;
  bool cache_enabled_ = true;
};

}  // namespace portarb

#endif  // PORTARB_BDD_HPP_
