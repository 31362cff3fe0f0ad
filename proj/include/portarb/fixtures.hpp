#ifndef PORTARB_FIXTURES_HPP_
#define PORTARB_FIXTURES_HPP_

#include <string>
#include <vector>

namespace portarb
{

/// Paths of one checked-in example under `fixtures/<name>/`.
struct Fixture
{
  std::string name;
  std::string model;            // model.xml
  std::string network;          // network.xml
  std::string scenario;         // scenario.json
  std::string expected_rules;   // expected_rules.txt
  std::string expected_trace;   // expected_trace.jsonl
};

/// Directory holding the fixtures; set at build time, overridable through
/// the PORTARB_FIXTURES environment variable.
std::string fixture_root();

/// "be-curious", "search-and-track", "no-rules", "conflict-demo".
const std::vector<std::string>& fixture_names();

/// Throws std::invalid_argument for an unknown name.
Fixture fixture(const std::string& name);

}  // namespace portarb

#endif  // PORTARB_FIXTURES_HPP_
