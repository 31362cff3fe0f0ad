// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "portarb/arbiter.hpp"
#include "portarb/bdd.hpp"
#include "portarb/cli.hpp"
#include "portarb/error.hpp"
#include "portarb/fixtures.hpp"
#include "portarb/pipeline.hpp"
#include "portarb/simnet.hpp"
#include "support/expr_oracle.hpp"

using namespace portarb;

namespace
{

using Clock = std::chrono::steady_clock;

// Collects failed checks for one criterion.
struct Check
{
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what)
  {
    if (!ok && failures.size() < 10)
      failures.push_back(what);
  }
  bool ok() const { return failures.empty(); }
};

struct Loaded
{
  Scenario scenario;
  Compilation compilation;
};

Loaded load(const std::string& name)
{
  Scenario s = load_scenario(fixture(name).scenario);
  Compilation c = compile(parse_behavior_model(read_file(s.model_path)),
                          parse_network(read_file(s.network_path)), s.auto_observe);
  return {std::move(s), std::move(c)};
}

Trace simulate(const Loaded& l)
{
  return run(l.scenario, l.compilation.validation.network, l.compilation.rules);
}

std::string rules_at(const RuleSet& rs)
{
  return emit_rules(rs, RuleFormat::Text);
}

bool has_line(const std::string& text, const std::string& line)
{
  return text.find(line + "\n") != std::string::npos;
}

// ---------------------------------------------------------------------------

void golden_rules(Check& c)
{
  const Fixture f = fixture("search-and-track");
  const NetworkDescription net = parse_network(read_file(f.network));
  const Compilation base = compile(parse_behavior_model(read_file(f.model)), net, true);
  c.expect(base.ok(), "search-and-track model compiles with auto-observe");
  const std::string text = rules_at(base.rules);

  // The complete rule set, one line per rule.
  const std::set<std::string> expected{
      "/RandomLook/pos:o and not /Face/pos:o and not /Object/pos:o => Select(/RandomLook/pos:o) @ /Gaze/pos:i",
      "/Face/pos:o and not /Object/pos:o => Select(/Face/pos:o) @ /Gaze/pos:i",
      "/Object/pos:o and not /collision:o => Select(/Object/pos:o) @ /Gaze/pos:i",
      "/RestArm/pos:o and not /Object/pos:o => Select(/RestArm/pos:o) @ /Arm/pos:i",
      "/Object/pos:o and not /collision:o => Select(/Object/pos:o) @ /Arm/pos:i",
  };
  std::set<std::string> got;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    got.insert(line);
  c.expect(got == expected, "rule set equals the five expected rules");
  c.expect(base.rules.rules.size() == 5, "exactly five rules");

  // Displayed rules, verbatim in ASCII.
  c.expect(has_line(text, "/RandomLook/pos:o and not /Face/pos:o and not /Object/pos:o => "
                          "Select(/RandomLook/pos:o) @ /Gaze/pos:i"),
           "look-around rule");
  c.expect(has_line(text, "/Object/pos:o and not /collision:o => Select(/Object/pos:o) @ /Arm/pos:i"),
           "object rule at the arm");
  c.expect(has_line(text, "/RestArm/pos:o and not /Object/pos:o => Select(/RestArm/pos:o) @ /Arm/pos:i"),
           "rest-arm rule");

  // The rest-arm rule with the collision conjunct comes out of the variant model.
  const Compilation variant = compile(
      parse_behavior_model(read_file(fixture_root() + "/search-and-track/model_restarm_collision.xml")), net,
      true);
  c.expect(has_line(rules_at(variant.rules),
                    "/RestArm/pos:o and not /Object/pos:o and not /collision:o => "
                    "Select(/RestArm/pos:o) @ /Arm/pos:i"),
           "rest-arm rule with collision from the variant model");

  c.expect(text == read_file(f.expected_rules), "text output equals the oracle file");
}

void bdd_oracle(Check& c)
{
  std::mt19937 rng(8128);
  size_t compared = 0;
  for (int i = 0; i < 600; ++i) {
    const auto vars = testkit::make_ports(1 + i % 8);
    const BoolExpr e = testkit::random_expr(rng, vars, 5);
    BddManager m;
    const NodeRef n = m.build(e);
    for (uint32_t bits = 0; bits < (1u << vars.size()); ++bits) {
      c.expect(m.evaluate(n, testkit::assignment_of(vars, bits)) == testkit::oracle_eval(e, vars, bits),
               "evaluate matches truth table for " + render(e));
      ++compared;
    }
    c.expect(m.check_invariants(), "diagram invariants hold");
  }

  // Canonicity: within one manager, equal truth tables give equal handles and
  // different truth tables give different handles.
  for (size_t nv : {3u, 5u, 8u}) {
    const auto vars = testkit::make_ports(nv);
    BddManager m;
    for (const auto& v : vars)
      m.var(v);
    std::map<std::vector<bool>, NodeRef> by_table;
    std::map<NodeRef, std::vector<bool>> by_node;
    for (int i = 0; i < 400; ++i) {
      const BoolExpr e = testkit::random_expr(rng, vars, nv == 8 ? 4 : 3);
      const NodeRef n = m.build(e);
      const auto table = testkit::truth_table(e, vars);
      const auto [it, fresh] = by_table.emplace(table, n);
      c.expect(fresh || it->second == n, "equal functions share a node");
      const auto [jt, fresh_node] = by_node.emplace(n, table);
      c.expect(fresh_node || jt->second == table, "one node, one function");
    }
  }
  c.expect(compared > 500, "enough assignments compared");
}

void search_and_track_scenario(Check& c)
{
  const Loaded l = load("search-and-track");
  const Trace t = simulate(l);
  c.expect(serialize_trace(t) == read_file(fixture("search-and-track").expected_trace),
           "trace equals the oracle trace byte for byte");

  const PortName gaze("/Gaze/pos:i"), arm("/Arm/pos:i");
  const PortName face("/Face/pos:o"), look("/RandomLook/pos:o"), obj("/Object/pos:o"),
      rest("/RestArm/pos:o");
  size_t a = 0, b = 0, cc = 0;
  for (const auto& r : t.records) {
    if (r.t >= 5000 && r.t < 9000 && r.dst == gaze) {
      if (r.src == face) {
        c.expect(r.outcome == Outcome::Accept, "(a) face accepted at t=" + std::to_string(r.t));
        ++a;
      }
      if (r.src == look)
        c.expect(r.outcome == Outcome::Discard && r.reason == Reason::ConstraintFalse,
                 "(a) random look discarded at t=" + std::to_string(r.t));
    }
    if (r.t >= 10000 && r.t < 14000) {
      if (r.src == obj) {
        c.expect(r.outcome == Outcome::Accept, "(b) object accepted at t=" + std::to_string(r.t));
        ++b;
      }
      if (r.src == rest && r.dst == arm)
        c.expect(r.outcome == Outcome::Discard, "(b) rest arm discarded at t=" + std::to_string(r.t));
    }
    if (r.t >= 14000 && r.t < 16000 && r.dst == arm) {
      c.expect(r.outcome == Outcome::Discard, "(c) arm accepts nothing at t=" + std::to_string(r.t));
      c.expect(r.src != obj || r.reason == Reason::ConstraintFalse, "(c) object fails the collision test");
      c.expect(r.src != rest || (r.reason == Reason::ConstraintFalse && r.assignment.at(obj)),
               "(c) rest arm fails because the object stays active");
      ++cc;
    }
  }
  c.expect(a == 40, "(a) 40 face messages");
  c.expect(b == 80, "(b) 80 object messages across both ports");
  c.expect(cc == 60, "(c) 60 arm messages");
}

void window_boundaries(Check& c)
{
  const Connection conn = Connection::make(PortName("/a:o"), PortName("/x:i"));
  ActivationTable table(1000);
  table.record(conn, 0);
  c.expect(table.active(conn, 999), "active at 999");
  c.expect(!table.active(conn, 1000), "inactive at 1000");

  // Random arrivals on three connections, replayed against the full history.
  const std::vector<Connection> in{
      Connection::make(PortName("/a:o"), PortName("/x:i")),
      Connection::make(PortName("/b:o"), PortName("/x:i")),
      Connection::make(PortName("/c:o"), PortName("/x:i")),
  };
  std::mt19937 rng(1000);
  for (int run = 0; run < 200; ++run) {
    const TimeMs window = run % 4 == 0 ? 1000 : 1 + static_cast<TimeMs>(rng() % 1500);
    ActivationTable act(window);
    std::vector<std::pair<size_t, TimeMs>> history;
    TimeMs t = 0;
    for (int k = 0; k < 100; ++k) {
      t += static_cast<TimeMs>(rng() % 700);
      const size_t which = rng() % in.size();
      act.record(in[which], t);
      history.emplace_back(which, t);
      // Probe around every window edge of every arrival so far.
      for (TimeMs probe : {t, t + window - 1, t + window, t + window + 1, t + static_cast<TimeMs>(rng() % 2000)}) {
        for (size_t j = 0; j < in.size(); ++j) {
          bool want = false;
          for (const auto& [w, at] : history)
            if (w == j && at <= probe && probe - at < window)
              want = true;
          c.expect(act.active(in[j], probe) == want, "replay agrees at probe " + std::to_string(probe));
        }
      }
    }
  }
}

void at_most_one_winner(Check& c)
{
  const Loaded l = load("search-and-track");
  const Trace t = simulate(l);
  std::map<std::pair<TimeMs, PortName>, int> accepts;
  for (const auto& r : t.records)
    if (r.outcome == Outcome::Accept)
      ++accepts[{r.t, r.dst}];
  for (const auto& [key, n] : accepts)
    c.expect(n == 1, "single accept at t=" + std::to_string(key.first) + " " + key.second.str());
  c.expect(!accepts.empty(), "search-and-track accepts something");
  c.expect(l.compilation.conflicts.empty(), "no conflict warnings for search-and-track");

  const Loaded demo = load("conflict-demo");
  bool flagged = false;
  for (const auto& d : demo.compilation.conflicts)
    flagged = flagged || d.code == "CONFLICT";
  c.expect(flagged, "conflict-demo is flagged");
}

void determinism(Check& c)
{
  for (const auto& name : fixture_names()) {
    const Fixture f = fixture(name);
    std::string first;
    for (int i = 0; i < 10; ++i) {
      const Loaded l = load(name);
      std::string bytes = emit_rules(l.compilation.rules, RuleFormat::Text) +
                          emit_rules(l.compilation.rules, RuleFormat::Json) + serialize_trace(simulate(l));
      std::ostringstream out, err;
      std::vector<std::string> args{"compile", f.model, f.network, "--format", "json"};
      if (l.scenario.auto_observe)
        args.push_back("--auto-observe");
      bytes += std::to_string(run_cli(args, out, err)) + out.str() + err.str();
      if (i == 0)
        first = bytes;
      else
        c.expect(bytes == first, name + " run " + std::to_string(i) + " differs");
    }
  }
}

void no_rule_semantics(Check& c)
{
  const Trace none = simulate(load("no-rules"));
  c.expect(!none.records.empty(), "no-rules trace is not empty");
  for (const auto& r : none.records)
    c.expect(r.outcome == Outcome::Discard && r.reason == Reason::NoRule,
             "no-rules record at t=" + std::to_string(r.t) + " is a NO_RULE discard");

  const Trace sat = simulate(load("search-and-track"));
  size_t seen = 0;
  for (const auto& r : sat.records)
    if (r.src == PortName("/collision:o") && r.dst == PortName("/Arm/pos:i")) {
      ++seen;
      c.expect(r.outcome == Outcome::Discard && r.reason == Reason::NoRule,
               "collision at the arm discarded at t=" + std::to_string(r.t));
    }
  c.expect(seen == 20, "20 collision messages reach the arm");
}

struct Criterion
{
  int id;
  std::string name;
  std::function<void(Check&)> body;
  double limit_s;  // 0 = no runtime limit
};

}  // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "golden rule extraction", golden_rules, 1.0},
      {2, "BDD agrees with truth tables and is canonical", bdd_oracle, 10.0},
      {3, "search-and-track scenario end to end", search_and_track_scenario, 2.0},
      {4, "activation window boundaries", window_boundaries, 0},
      {5, "at most one winner per port and instant", at_most_one_winner, 0},
      {6, "determinism over 10 runs per fixture", determinism, 0},
      {7, "observation-only connections never deliver", no_rule_semantics, 0},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = Clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (cr.limit_s > 0 && secs >= cr.limit_s) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "took %.3f s, limit %.0f s", secs, cr.limit_s);
      check.failures.push_back(buf);
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (check.ok() ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.name << " ("
              << timing << ")\n";
    for (const auto& f : check.failures)
      std::cout << "    " << f << "\n";
    failed += check.ok() ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
