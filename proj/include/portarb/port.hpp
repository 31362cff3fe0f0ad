#ifndef PORTARB_PORT_HPP_
#define PORTARB_PORT_HPP_

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace portarb
{

enum class Direction { Input, Output };

/// Name of a component port, e.g. `/Gaze/pos:i`.
///
/// Grammar: `/Segment(/Segment)*:(i|o)`. Segments are non-empty and contain
/// no whitespace and none of the condition-language operator characters
/// `( ) & | ! ,` so that a port name is always a single condition token.
class PortName
{
public:
  PortName() = default;

  /// Throws std::invalid_argument if `text` does not match the port grammar.
  explicit PortName(std::string text);

  static bool is_valid(std::string_view text);

  const std::string& str() const { return text_; }
  Direction direction() const;
  bool is_input() const { return direction() == Direction::Input; }
  bool is_output() const { return direction() == Direction::Output; }
  bool empty() const { return text_.empty(); }

  friend auto operator<=>(const PortName&, const PortName&) = default;

private:
  std::string text_;
};

/// A (source output port, destination input port) pair.
struct Connection
{
  PortName source;
  PortName destination;

  /// Throws std::invalid_argument unless source is `:o` and destination is `:i`.
  static Connection make(const PortName& source, const PortName& destination);

  std::string str() const;

  friend auto operator<=>(const Connection&, const Connection&) = default;
};

}  // namespace portarb

template <>
struct std::hash<portarb::PortName>
{
  size_t operator()(const portarb::PortName& p) const noexcept
  {
    return std::hash<std::string>{}(p.str());
  }
};

#endif  // PORTARB_PORT_HPP_
