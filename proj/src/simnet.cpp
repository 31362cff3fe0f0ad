#include "portarb/simnet.hpp"

#include <algorithm>
#include <filesystem>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

#include "portarb/error.hpp"

namespace portarb
{

using nlohmann::json;

namespace
{

std::string resolve(const std::string& path, const std::string& base_dir)
{
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty())
    return p.lexically_normal().string();
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

TimeMs require_int(const json& obj, const char* key, const std::string& where)
{
  if (!obj.contains(key))
    throw ParseError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ParseError(where + ": '" + key + "' must be an integer");
  return v.get<TimeMs>();
}

std::string require_string(const json& obj, const char* key, const std::string& where)
{
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw ParseError(where + ": '" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

PortName require_port(const json& obj, const std::string& where, Direction dir)
{
  const std::string text = require_string(obj, "port", where);
  if (!PortName::is_valid(text))
    throw ParseError(where + ": invalid port name '" + text + "'");
  PortName p(text);
  if (p.direction() != dir)
    throw ParseError(where + ": port '" + text + "' must be an " +
                     (dir == Direction::Output ? "output (:o)" : "input (:i)") + " port");
  return p;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                         const std::string& where)
{
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError(where + ": unknown field '" + key + "'");
  }
}

PeriodicSource parse_source(const json& obj, TimeMs horizon, const std::string& where)
{
  if (!obj.is_object())
    throw ParseError(where + ": 'source' must be an object");
  reject_unknown_keys(obj, {"port", "period_ms", "phase_ms", "active"}, where);
  PeriodicSource src;
  src.port = require_port(obj, where, Direction::Output);
  src.period_ms = require_int(obj, "period_ms", where);
  if (src.period_ms <= 0)
    throw ParseError(where + ": period_ms must be positive");
  src.phase_ms = obj.contains("phase_ms") ? require_int(obj, "phase_ms", where) : 0;
  if (src.phase_ms < 0)
    throw ParseError(where + ": phase_ms must not be negative");
  if (!obj.contains("active")) {
    src.active.push_back({0, horizon});
  } else {
    const json& list = obj.at("active");
    if (!list.is_array())
      throw ParseError(where + ": 'active' must be an array of [start, end] pairs");
    for (const json& iv : list) {
      if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number_integer() ||
          !iv[1].is_number_integer())
        throw ParseError(where + ": each active interval must be [start, end]");
      ActiveInterval a{iv[0].get<TimeMs>(), iv[1].get<TimeMs>()};
      if (a.start < 0 || a.end <= a.start)
        throw ParseError(where + ": invalid interval [" + std::to_string(a.start) + ", " +
                         std::to_string(a.end) + ")");
      src.active.push_back(a);
    }
    std::sort(src.active.begin(), src.active.end(),
              [](const ActiveInterval& x, const ActiveInterval& y) { return x.start < y.start; });
    for (size_t i = 1; i < src.active.size(); ++i)
      if (src.active[i].start < src.active[i - 1].end)
        throw ParseError(where + ": active intervals overlap");
  }
  return src;
}

struct LaterEvent
{
  bool operator()(const Event& a, const Event& b) const
  {
    return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
  }
};

}  // namespace

std::optional<TimeMs> PeriodicSource::next_emission(TimeMs from) const
{
  for (const auto& iv : active) {
    const TimeMs lo = std::max({from, iv.start, phase_ms});
    const TimeMs k = (lo - phase_ms + period_ms - 1) / period_ms;
    const TimeMs instant = phase_ms + k * period_ms;
    if (instant < iv.end)
      return instant;
  }
  return std::nullopt;
}

Scenario parse_scenario(std::string_view json_text, const std::string& base_dir)
{
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: malformed JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ParseError("scenario: top level must be an object");
  reject_unknown_keys(doc, {"description", "model", "network", "horizon_ms", "auto_observe",
                            "components"},
                      "scenario");

  Scenario s;
  s.model_path = resolve(require_string(doc, "model", "scenario"), base_dir);
  s.network_path = resolve(require_string(doc, "network", "scenario"), base_dir);
  s.horizon_ms = require_int(doc, "horizon_ms", "scenario");
  if (s.horizon_ms < 0)
    throw ParseError("scenario: horizon_ms must not be negative");
  if (doc.contains("auto_observe")) {
    if (!doc.at("auto_observe").is_boolean())
      throw ParseError("scenario: 'auto_observe' must be a boolean");
    s.auto_observe = doc.at("auto_observe").get<bool>();
  }
  if (!doc.contains("components") || !doc.at("components").is_array())
    throw ParseError("scenario: 'components' must be an array");

  std::set<std::string> names;
  for (const json& c : doc.at("components")) {
    if (!c.is_object())
      throw ParseError("scenario: component entries must be objects");
    ScriptedComponent comp;
    comp.name = require_string(c, "name", "scenario component");
    const std::string where = "component '" + comp.name + "'";
    if (!names.insert(comp.name).second)
      throw ParseError("scenario: duplicate component name '" + comp.name + "'");
    reject_unknown_keys(c, {"name", "source", "sink"}, where);
    const bool is_source = c.contains("source");
    const bool is_sink = c.contains("sink");
    if (is_source == is_sink)
      throw ParseError(where + ": needs exactly one of 'source' or 'sink'");
    if (is_source) {
      comp.role = parse_source(c.at("source"), s.horizon_ms, where);
    } else {
      const json& sink = c.at("sink");
      if (!sink.is_object())
        throw ParseError(where + ": 'sink' must be an object");
      reject_unknown_keys(sink, {"port"}, where);
      comp.role = Sink{require_port(sink, where, Direction::Input)};
    }
    s.components.push_back(std::move(comp));
  }
  return s;
}

void check_scenario_ports(const Scenario& scenario, const NetworkDescription& network)
{
  for (const auto& comp : scenario.components) {
    if (const auto* src = std::get_if<PeriodicSource>(&comp.role)) {
      if (!network.declares_output(src->port))
        throw ParseError("component '" + comp.name + "': port '" + src->port.str() +
                         "' is not in the network");
    } else {
      const auto& sink = std::get<Sink>(comp.role);
      if (!network.declares_input(sink.port))
        throw ParseError("component '" + comp.name + "': port '" + sink.port.str() +
                         "' is not in the network");
    }
  }
}

Scenario load_scenario(const std::string& path)
{
  const std::string base = std::filesystem::path(path).parent_path().string();
  Scenario s = parse_scenario(read_file(path), base);
  check_scenario_ports(s, parse_network(read_file(s.network_path)));
  return s;
}

Trace run(const Scenario& scenario, const NetworkDescription& network, const RuleSet& rules,
          const RunOptions& options)
{
  const TimeMs end = options.until ? std::min(*options.until, scenario.horizon_ms)
                                   : scenario.horizon_ms;

  std::map<PortName, PortArbiter> arbiters;
  for (const auto& port : network.destination_ports())
    arbiters.emplace(port, PortArbiter(port, network.incoming(port), rules.at(port),
                                       network.window_ms(port)));

  std::map<PortName, std::vector<std::string>> sinks;
  for (const auto& comp : scenario.components)
    if (const auto* sink = std::get_if<Sink>(&comp.role))
      sinks[sink->port].push_back(comp.name);

  Trace trace;
  for (const auto& [port, names] : sinks)
    for (const auto& name : names)
      trace.deliveries[name];

  std::priority_queue<Event, std::vector<Event>, LaterEvent> queue;
  uint64_t seq = 0;
  auto schedule_wake = [&](size_t index, TimeMs from) {
    const auto& src = std::get<PeriodicSource>(scenario.components[index].role);
    if (auto next = src.next_emission(from); next && *next < end)
      queue.push({*next, seq++, Event::Kind::ComponentWake, index, {}});
  };
  for (size_t i = 0; i < scenario.components.size(); ++i)
    if (std::holds_alternative<PeriodicSource>(scenario.components[i].role))
      schedule_wake(i, 0);

  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    const ScriptedComponent& comp = scenario.components[ev.component];
    const auto& src = std::get<PeriodicSource>(comp.role);

    if (ev.kind == Event::Kind::ComponentWake) {
      queue.push({ev.time, seq++, Event::Kind::Emit, ev.component, comp.name});
      schedule_wake(ev.component, ev.time + 1);
      continue;
    }

    ++trace.emitted;
    for (const Connection& conn : network.outgoing(src.port)) {
      PortArbiter& arbiter = arbiters.at(conn.destination);
      Decision d = arbiter.arbitrate(conn, ev.time);
      trace.records.push_back({ev.time, conn.source, conn.destination, d.outcome, d.reason,
                               d.rule ? d.rule->text() : "-", std::move(d.assignment)});
      if (d.outcome == Outcome::Accept) {
        if (auto it = sinks.find(conn.destination); it != sinks.end())
          for (const auto& name : it->second)
            trace.deliveries[name].push_back({ev.time, conn.source, ev.payload});
      }
    }
  }
  return trace;
}

std::string serialize_trace(const Trace& trace)
{
  std::string out;
  for (const auto& r : trace.records) {
    nlohmann::ordered_json line;
    line["t"] = r.t;
    line["src"] = r.src.str();
    line["dst"] = r.dst.str();
    line["outcome"] = to_string(r.outcome);
    line["reason"] = to_string(r.reason);
    line["rule"] = r.rule;
    nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
    for (const auto& [port, value] : r.assignment)
      assignment[port.str()] = value;
    line["assignment"] = std::move(assignment);
    out += line.dump();
    out += '\n';
  }
  return out;
}

void write_trace(const Trace& trace, const std::string& path)
{
  write_file(path, serialize_trace(trace));
}

std::vector<TraceRecord> parse_trace(std::string_view text)
{
  std::vector<TraceRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const std::string where = "trace line " + std::to_string(line_no);
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error&) {
      throw ParseError(where + ": malformed JSON");
    }
    if (!obj.is_object())
      throw ParseError(where + ": expected an object");
    auto port = [&](const char* key) {
      const std::string s = require_string(obj, key, where);
      if (!PortName::is_valid(s))
        throw ParseError(where + ": invalid port '" + s + "'");
      return PortName(s);
    };
    TraceRecord r;
    r.t = require_int(obj, "t", where);
    r.src = port("src");
    r.dst = port("dst");
    const std::string outcome = require_string(obj, "outcome", where);
    if (outcome == "accept")
      r.outcome = Outcome::Accept;
    else if (outcome == "discard")
      r.outcome = Outcome::Discard;
    else
      throw ParseError(where + ": unknown outcome '" + outcome + "'");
    const std::string reason = require_string(obj, "reason", where);
    if (reason == "SELECTED")
      r.reason = Reason::Selected;
    else if (reason == "NO_RULE")
      r.reason = Reason::NoRule;
    else if (reason == "CONSTRAINT_FALSE")
      r.reason = Reason::ConstraintFalse;
    else
      throw ParseError(where + ": unknown reason '" + reason + "'");
    r.rule = require_string(obj, "rule", where);
    if (!obj.contains("assignment") || !obj.at("assignment").is_object())
      throw ParseError(where + ": 'assignment' must be an object");
    for (const auto& [key, value] : obj.at("assignment").items()) {
      if (!PortName::is_valid(key) || !value.is_boolean())
        throw ParseError(where + ": bad assignment entry '" + key + "'");
      r.assignment[PortName(key)] = value.get<bool>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string summarize(const Trace& trace, const NetworkDescription& network)
{
  struct Counts
  {
    size_t total = 0, accepted = 0, no_rule = 0, constraint_false = 0;
    std::vector<TimeMs> accepts;
  };
  std::map<PortName, Counts> by_port;
  for (const auto& port : network.destination_ports())
    by_port[port];
  for (const auto& r : trace.records) {
    Counts& c = by_port[r.dst];
    ++c.total;
    if (r.outcome == Outcome::Accept) {
      ++c.accepted;
      c.accepts.push_back(r.t);
    } else if (r.reason == Reason::NoRule) {
      ++c.no_rule;
    } else {
      ++c.constraint_false;
    }
  }

  std::ostringstream out;
  for (const auto& [port, c] : by_port) {
    out << port.str() << ": " << c.total << " messages, " << c.accepted << " accepted, "
        << (c.total - c.accepted) << " discarded (NO_RULE " << c.no_rule << ", CONSTRAINT_FALSE "
        << c.constraint_false << ")";
    const TimeMs window = network.window_ms(port);
    for (size_t i = 1; i < c.accepts.size(); ++i)
      if (c.accepts[i] - c.accepts[i - 1] > window)
        out << "; silent (" << c.accepts[i - 1] << ", " << c.accepts[i] << ")";
    out << "\n";
  }
  return out.str();
}

std::string explain(const std::vector<TraceRecord>& records, size_t index)
{
  const TraceRecord& r = records.at(index);
  std::ostringstream out;
  out << "t=" << r.t << " " << r.src.str() << " -> " << r.dst.str() << ": "
      << (r.outcome == Outcome::Accept ? "accepted" : "discarded") << "\n";

  if (r.reason == Reason::NoRule) {
    out << "  discarded: no rule selects " << r.src.str() << " at " << r.dst.str()
        << " (observation only)\n";
  } else {
    out << "  rule: " << r.rule << "\n";
    const auto arrow = r.rule.find(" => ");
    if (arrow == std::string::npos)
      throw ParseError("rule text without '=>': " + r.rule);
    const BoolExpr guard = parse_condition(std::string_view(r.rule).substr(0, arrow));
    std::vector<BoolExpr> conjuncts =
        guard.kind() == BoolExpr::Kind::And ? guard.children() : std::vector<BoolExpr>{guard};

    if (r.reason == Reason::Selected) {
      out << "  accepted: every conjunct holds\n";
    } else {
      // Start of the current activation run of `port`, as seen by this port's
      // successive snapshots.
      auto active_since = [&](const PortName& port) {
        TimeMs since = r.t;
        for (size_t i = index + 1; i-- > 0;) {
          if (records[i].dst != r.dst)
            continue;
          auto it = records[i].assignment.find(port);
          if (it == records[i].assignment.end() || !it->second)
            break;
          since = records[i].t;
        }
        return since;
      };
      std::vector<std::string> parts;
      for (const auto& c : conjuncts) {
        if (evaluate(c, r.assignment))
          continue;
        std::string part = "constraint `" + render(c) + "` false";
        for (const auto& port : literals(c)) {
          auto it = r.assignment.find(port);
          if (it != r.assignment.end() && it->second)
            part += "; " + port.str() + " active since " + std::to_string(active_since(port));
          else
            part += "; " + port.str() + " inactive";
        }
        parts.push_back(std::move(part));
      }
      out << "  discarded: ";
      for (size_t i = 0; i < parts.size(); ++i)
        out << (i ? "; " : "") << parts[i];
      out << "\n";
    }
  }

  out << "  assignment:";
  for (const auto& [port, value] : r.assignment)
    out << " " << port.str() << "=" << (value ? 1 : 0);
  out << "\n";
  return out.str();
}

}  // namespace portarb
