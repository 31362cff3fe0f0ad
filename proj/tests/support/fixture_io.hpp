#ifndef PORTARB_TESTS_FIXTURE_IO_HPP_
#define PORTARB_TESTS_FIXTURE_IO_HPP_

#include <string>

#include "portarb/error.hpp"
#include "portarb/fixtures.hpp"
#include "portarb/model.hpp"

namespace portarb::testkit
{

inline std::string fixture_path(const std::string& rel)
{
  return fixture_root() + "/" + rel;
}

inline BehaviorModel load_model(const std::string& rel)
{
  return parse_behavior_model(read_file(fixture_path(rel)));
}

inline NetworkDescription load_network(const std::string& rel)
{
  return parse_network(read_file(fixture_path(rel)));
}

}  // namespace portarb::testkit

#endif  // PORTARB_TESTS_FIXTURE_IO_HPP_
