#ifndef PORTARB_MODEL_HPP_
#define PORTARB_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "portarb/bool_expr.hpp"
#include "portarb/port.hpp"

namespace portarb
{

enum class NodeKind { Behavior, MetaBehavior };

/// A behavior (leaf, owns connections) or a meta-behavior (groups children).
struct BehaviorNode
{
  std::string name;
  NodeKind kind = NodeKind::Behavior;
  std::vector<Connection> configuration;  // Behavior only
  std::vector<BehaviorNode> children;     // MetaBehavior only
  BoolExpr condition;
  std::vector<std::string> inhibitions;

  bool is_leaf() const { return kind == NodeKind::Behavior; }

  friend bool operator==(const BehaviorNode&, const BehaviorNode&) = default;
};

struct BehaviorModel
{
  /// `<define>` entries in document order.
  std::vector<std::pair<std::string, std::string>> defines;
  std::vector<BehaviorNode> roots;

  friend bool operator==(const BehaviorModel&, const BehaviorModel&) = default;
};

struct Component
{
  std::string name;
  std::vector<PortName> inputs;
  std::vector<PortName> outputs;
};

/// Application description: components, their connections, and per
/// destination port activation windows.
class NetworkDescription
{
public:
  static constexpr int64_t kDefaultWindowMs = 1000;

  std::string name;
  std::vector<Component> components;
  std::vector<Connection> connections;
  std::map<PortName, int64_t> window_overrides;

  bool has_connection(const Connection& c) const;
  bool declares_output(const PortName& p) const;
  bool declares_input(const PortName& p) const;

  /// Window T for connections arriving at `destination`.
  int64_t window_ms(const PortName& destination) const;

  /// Connections whose destination is `port`, in declaration order.
  std::vector<Connection> incoming(const PortName& port) const;

  /// Connections leaving `port`, sorted by destination.
  std::vector<Connection> outgoing(const PortName& port) const;

  /// Input ports that terminate at least one connection, sorted.
  std::vector<PortName> destination_ports() const;
};

enum class Severity { Error, Warning };

struct Diagnostic
{
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::string location;

  bool is_error() const { return severity == Severity::Error; }

  /// `error V3 [Track Object]: ...`
  std::string str() const;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Parses the behavior-description XML (`define`, `meta_behavior`, `behavior`
/// with `config`, `condition`, `inhibition`). `${name}` references are
/// replaced textually from the `<define>` elements before the document is
/// interpreted. Throws ParseError.
BehaviorModel parse_behavior_model(std::string_view xml_text);

/// Writes a single-rooted document that parse_behavior_model reads back to an
/// equal model.
std::string serialize_behavior_model(const BehaviorModel& model);

/// Parses the application-description XML. Throws ParseError.
NetworkDescription parse_network(std::string_view xml_text);

/// Read-only index over a model: parent links and lookups by name.
class Hierarchy
{
public:
  explicit Hierarchy(const BehaviorModel& model);

  const BehaviorNode* find(const std::string& name) const;

  /// nullptr for top-level nodes.
  const BehaviorNode* parent(const std::string& name) const;

  /// Parent first, then grandparent, up to the outermost meta-behavior.
  std::vector<const BehaviorNode*> ancestors(const std::string& name) const;

  /// Nodes sharing `name`'s parent (top-level nodes share the implicit root),
  /// excluding `name` itself, in document order.
  std::vector<const BehaviorNode*> siblings(const std::string& name) const;

  /// Leaf behaviors under `node` (the node itself if it is a leaf), depth first.
  static std::vector<const BehaviorNode*> leaves(const BehaviorNode& node);

  /// All leaf behaviors in the model, depth first in document order.
  std::vector<const BehaviorNode*> all_leaves() const;

  const BehaviorModel& model() const { return *model_; }

private:
  const BehaviorModel* model_;
  std::map<std::string, const BehaviorNode*> by_name_;
  std::map<std::string, const BehaviorNode*> parent_of_;
};

}  // namespace portarb

#endif  // PORTARB_MODEL_HPP_
