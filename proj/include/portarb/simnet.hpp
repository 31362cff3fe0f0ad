#ifndef PORTARB_SIMNET_HPP_
#define PORTARB_SIMNET_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "portarb/arbiter.hpp"
#include "portarb/compiler.hpp"
#include "portarb/model.hpp"

namespace portarb
{

/// Half-open interval [start, end).
struct ActiveInterval
{
  TimeMs start = 0;
  TimeMs end = 0;
};

/// Emits on `port` at phase + k * period for every k >= 0 whose instant falls
/// inside one of the active intervals.
struct PeriodicSource
{
  PortName port;
  TimeMs period_ms = 0;
  TimeMs phase_ms = 0;
  std::vector<ActiveInterval> active;

  /// First emission instant >= `from`, if any.
  std::optional<TimeMs> next_emission(TimeMs from) const;
};

/// Records every message the arbiter at `port` accepts.
struct Sink
{
  PortName port;
};

struct ScriptedComponent
{
  std::string name;
  std::variant<PeriodicSource, Sink> role;
};

struct Scenario
{
  std::string model_path;    // resolved against the scenario file's directory
  std::string network_path;  // likewise
  TimeMs horizon_ms = 0;
  bool auto_observe = false;
  std::vector<ScriptedComponent> components;
};

/// Parses the scenario JSON. Relative model/network paths are resolved
/// against `base_dir`. Throws ParseError on schema violations.
Scenario parse_scenario(std::string_view json_text, const std::string& base_dir = "");

/// Reads and parses a scenario file, then checks every component port against
/// the referenced network. Throws IoError / ParseError.
Scenario load_scenario(const std::string& path);

/// Throws ParseError if a component port is missing from `network`.
void check_scenario_ports(const Scenario& scenario, const NetworkDescription& network);

struct Event
{
  enum class Kind { Emit, ComponentWake };

  TimeMs time = 0;
  uint64_t seq = 0;
  Kind kind = Kind::ComponentWake;
  size_t component = 0;
  std::string payload;
};

struct TraceRecord
{
  TimeMs t = 0;
  PortName src;
  PortName dst;
  Outcome outcome = Outcome::Discard;
  Reason reason = Reason::NoRule;
  std::string rule;  // "-" when no rule applies
  std::map<PortName, bool> assignment;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Delivery
{
  TimeMs t = 0;
  PortName source;
  std::string payload;
};

struct Trace
{
  std::vector<TraceRecord> records;
  /// Accepted messages per sink component name.
  std::map<std::string, std::vector<Delivery>> deliveries;
  /// Messages emitted by sources (before fan-out).
  size_t emitted = 0;
};

struct RunOptions
{
  std::optional<TimeMs> until;  // stop before this time as well as before the horizon
};

/// Runs the scenario's scripted components over `network` with one arbiter
/// per destination port, configured from `rules`.
Trace run(const Scenario& scenario, const NetworkDescription& network, const RuleSet& rules,
          const RunOptions& options = {});

/// One compact JSON object per line: t, src, dst, outcome, reason, rule, assignment.
std::string serialize_trace(const Trace& trace);
void write_trace(const Trace& trace, const std::string& path);

/// Inverse of serialize_trace for the records. Throws ParseError.
std::vector<TraceRecord> parse_trace(std::string_view text);

/// Per destination port: message counts by outcome and reason, and the spans
/// between consecutive accepted messages longer than the port's window.
std::string summarize(const Trace& trace, const NetworkDescription& network);

/// Human-readable account of `records[index]`: the rule, which conjuncts
/// failed, and since when the offending ports have been active. Throws
/// ParseError if the stored rule text does not parse.
std::string explain(const std::vector<TraceRecord>& records, size_t index);

}  // namespace portarb

#endif  // PORTARB_SIMNET_HPP_
