#include "portarb/port.hpp"

#include <cctype>
#include <stdexcept>

namespace portarb
{

namespace
{

bool is_segment_char(char c)
{
  if (std::isspace(static_cast<unsigned char>(c)) || std::iscntrl(static_cast<unsigned char>(c)))
    return false;
  switch (c) {
    case '/':
    case '(':
    case ')':
    case '&':
    case '|':
    case '!':
    case ',':
      return false;
    default:
      return true;
  }
}

}  // namespace

bool PortName::is_valid(std::string_view text)
{
  if (text.size() < 4 || text.front() != '/')
    return false;
  const std::string_view suffix = text.substr(text.size() - 2);
  if (suffix != ":i" && suffix != ":o")
    return false;
  const std::string_view body = text.substr(1, text.size() - 3);
  size_t segment_len = 0;
  for (char c : body) {
    if (c == '/') {
      if (segment_len == 0)
        return false;
      segment_len = 0;
    } else if (is_segment_char(c)) {
      ++segment_len;
    } else {
      return false;
    }
  }
  return segment_len > 0;
}

PortName::PortName(std::string text) : text_(std::move(text))
{
  if (!is_valid(text_))
    throw std::invalid_argument("invalid port name '" + text_ + "'");
}

Direction PortName::direction() const
{
  return text_.back() == 'i' ? Direction::Input : Direction::Output;
}

Connection Connection::make(const PortName& source, const PortName& destination)
{
  if (!source.is_output())
    throw std::invalid_argument("connection source '" + source.str() + "' is not an output port");
  if (!destination.is_input())
    throw std::invalid_argument("connection destination '" + destination.str() +
                                "' is not an input port");
  return Connection{source, destination};
}

std::string Connection::str() const { return source.str() + " -> " + destination.str(); }

}  // namespace portarb
