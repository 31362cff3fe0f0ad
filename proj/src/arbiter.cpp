#include "portarb/arbiter.hpp"

#include <algorithm>
#include <stdexcept>

namespace portarb
{

ActivationTable::ActivationTable(TimeMs window_ms) : window_(window_ms)
{
  if (window_ms <= 0)
    throw std::invalid_argument("activation window must be positive");
}

void ActivationTable::record(const Connection& c, TimeMs t)
{
  if (latest_ && t < *latest_)
    throw std::invalid_argument("time regression: arrival at " + std::to_string(t) +
                                " after an arrival at " + std::to_string(*latest_));
  last_[c] = t;
  latest_ = t;
}

bool ActivationTable::active(const Connection& c, TimeMs t) const
{
  auto it = last_.find(c);
  return it != last_.end() && t - it->second < window_;
}

std::optional<TimeMs> ActivationTable::last_arrival(const Connection& c) const
{
  auto it = last_.find(c);
  if (it == last_.end())
    return std::nullopt;
  return it->second;
}

std::string to_string(Outcome o) { return o == Outcome::Accept ? "accept" : "discard"; }

std::string to_string(Reason r)
{
  switch (r) {
    case Reason::Selected:
      return "SELECTED";
    case Reason::NoRule:
      return "NO_RULE";
    case Reason::ConstraintFalse:
      return "CONSTRAINT_FALSE";
  }
  return "?";
}

PortArbiter::PortArbiter(PortName port, std::vector<Connection> incoming,
                         std::vector<const SelectionRule*> rules, TimeMs window_ms)
    : port_(std::move(port)), incoming_(std::move(incoming)), activation_(window_ms)
{
  for (const auto& c : incoming_)
    if (c.destination != port_)
      throw std::invalid_argument("connection " + c.str() + " does not end at " + port_.str());

  for (const SelectionRule* rule : rules) {
    if (rule->port != port_)
      throw std::invalid_argument("rule for " + rule->port.str() + " given to arbiter at " +
                                  port_.str());
    const bool connected = std::any_of(incoming_.begin(), incoming_.end(), [&](const Connection& c) {
      return c.source == rule->candidate;
    });
    if (!connected)
      throw std::invalid_argument("rule candidate " + rule->candidate.str() +
                                  " is not connected to " + port_.str());
    rules_[rule->candidate] = {rule, bdd_.build(rule->guard())};
  }
}

void PortArbiter::require_incoming(const Connection& connection) const
{
  if (std::find(incoming_.begin(), incoming_.end(), connection) == incoming_.end())
    throw std::invalid_argument("unknown connection " + connection.str() + " at " + port_.str());
}

void PortArbiter::record_arrival(const Connection& connection, TimeMs t)
{
  require_incoming(connection);
  activation_.record(connection, t);
}

std::map<PortName, bool> PortArbiter::activation_snapshot(TimeMs t) const
{
  std::map<PortName, bool> out;
  for (const auto& c : incoming_) {
    bool& slot = out[c.source];
    slot = slot || activation_.active(c, t);
  }
  return out;
}

Decision PortArbiter::decide(const Connection& connection, TimeMs t) const
{
  require_incoming(connection);
  Decision d;
  d.assignment = activation_snapshot(t);
  auto it = rules_.find(connection.source);
  if (it == rules_.end()) {
    d.outcome = Outcome::Discard;
    d.reason = Reason::NoRule;
    return d;
  }
  d.rule = it->second.first;
  if (bdd_.evaluate(it->second.second, d.assignment)) {
    d.outcome = Outcome::Accept;
    d.reason = Reason::Selected;
  } else {
    d.outcome = Outcome::Discard;
    d.reason = Reason::ConstraintFalse;
  }
  return d;
}

Decision PortArbiter::arbitrate(const Connection& connection, TimeMs t)
{
  record_arrival(connection, t);
  return decide(connection, t);
}

std::optional<NodeRef> PortArbiter::rule_node(const PortName& candidate) const
{
  auto it = rules_.find(candidate);
  if (it == rules_.end())
    return std::nullopt;
  return it->second.second;
}

}  // namespace portarb
