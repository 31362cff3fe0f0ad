#ifndef PORTARB_ARBITER_HPP_
#define PORTARB_ARBITER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "portarb/bdd.hpp"
#include "portarb/compiler.hpp"
#include "portarb/port.hpp"

namespace portarb
{

using TimeMs = int64_t;

/// Last arrival time per connection. A connection is active at t iff it has
/// an arrival a with t - a < window (strictly).
class ActivationTable
{
public:
  explicit ActivationTable(TimeMs window_ms = 1000);

  /// Throws std::invalid_argument if t is earlier than any recorded arrival.
  void record(const Connection& c, TimeMs t);

  bool active(const Connection& c, TimeMs t) const;
  std::optional<TimeMs> last_arrival(const Connection& c) const;
  TimeMs window() const { return window_; }

private:
  TimeMs window_;
  std::map<Connection, TimeMs> last_;
  std::optional<TimeMs> latest_;
};

enum class Outcome { Accept, Discard };
enum class Reason { Selected, NoRule, ConstraintFalse };

std::string to_string(Outcome o);  // "accept" / "discard"
std::string to_string(Reason r);   // "SELECTED" / "NO_RULE" / "CONSTRAINT_FALSE"

struct Decision
{
  Outcome outcome = Outcome::Discard;
  Reason reason = Reason::NoRule;
  /// Activation of every distinct incoming source port when the decision was made.
  std::map<PortName, bool> assignment;
  /// Rule that was evaluated, if any.
  const SelectionRule* rule = nullptr;
};

/// Multiplexer at one input port: each arriving message is accepted iff the
/// arriving connection's selection rule holds under the current activation
/// states of all incoming connections.
class PortArbiter
{
public:
  /// `rules` are the rules whose port is `port`; they must outlive the arbiter.
  /// Throws std::invalid_argument if a rule belongs to another port or names a
  /// candidate that is not an incoming source.
  PortArbiter(PortName port, std::vector<Connection> incoming,
              std::vector<const SelectionRule*> rules, TimeMs window_ms);

  PortArbiter(const PortArbiter&) = delete;
  PortArbiter& operator=(const PortArbiter&) = delete;
  PortArbiter(PortArbiter&&) = default;
  PortArbiter& operator=(PortArbiter&&) = default;

  /// Marks `connection` active from t, whatever the later decision is.
  void record_arrival(const Connection& connection, TimeMs t);

  /// Evaluates the arriving connection's rule; record_arrival must already
  /// have been applied for this message.
  Decision decide(const Connection& connection, TimeMs t) const;

  /// record_arrival followed by decide.
  Decision arbitrate(const Connection& connection, TimeMs t);

  std::map<PortName, bool> activation_snapshot(TimeMs t) const;

  const PortName& port() const { return port_; }
  const std::vector<Connection>& incoming() const { return incoming_; }
  const ActivationTable& activation() const { return activation_; }
  const BddManager& bdd() const { return bdd_; }

  /// Rule BDD for `candidate`, if one exists.
  std::optional<NodeRef> rule_node(const PortName& candidate) const;

private:
  void require_incoming(const Connection& connection) const;

  PortName port_;
  std::vector<Connection> incoming_;
  ActivationTable activation_;
  BddManager bdd_;
  std::map<PortName, std::pair<const SelectionRule*, NodeRef>> rules_;
};

}  // namespace portarb

#endif  // PORTARB_ARBITER_HPP_
