#include "portarb/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#ifndef PORTARB_FIXTURE_DIR
#define PORTARB_FIXTURE_DIR "fixtures"
#endif

namespace portarb
{

std::string fixture_root()
{
  if (const char* env = std::getenv("PORTARB_FIXTURES"); env != nullptr && *env != '\0')
    return env;
  return PORTARB_FIXTURE_DIR;
}

const std::vector<std::string>& fixture_names()
{
  static const std::vector<std::string> names{"be-curious", "search-and-track", "no-rules",
                                              "conflict-demo"};
  return names;
}

Fixture fixture(const std::string& name)
{
  const auto& names = fixture_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown fixture '" + name + "'");
  const std::string dir = fixture_root() + "/" + name + "/";
  return {name,
          dir + "model.xml",
          dir + "network.xml",
          dir + "scenario.json",
          dir + "expected_rules.txt",
          dir + "expected_trace.jsonl"};
}

}  // namespace portarb
