#ifndef PORTARB_BOOL_EXPR_HPP_
#define PORTARB_BOOL_EXPR_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "portarb/error.hpp"
#include "portarb/port.hpp"

namespace portarb
{

/// Propositional formula over source-port activation literals.
class BoolExpr
{
public:
  enum class Kind { True, False, Literal, Not, And, Or };

  BoolExpr() = default;  // True

  static BoolExpr constant(bool value);
  static BoolExpr literal(PortName port);
  static BoolExpr negation(BoolExpr child);
  static BoolExpr conjunction(std::vector<BoolExpr> children);
  static BoolExpr disjunction(std::vector<BoolExpr> children);

  Kind kind() const { return kind_; }
  const PortName& port() const { return port_; }
  const std::vector<BoolExpr>& children() const { return children_; }

  bool is_true() const { return kind_ == Kind::True; }
  bool is_false() const { return kind_ == Kind::False; }

  friend bool operator==(const BoolExpr&, const BoolExpr&) = default;

private:
  Kind kind_ = Kind::True;
  PortName port_;
  std::vector<BoolExpr> children_;
};

/// Syntax error in a condition, with the 0-based byte offset it was found at.
class ConditionSyntaxError : public ParseError
{
public:
  ConditionSyntaxError(const std::string& message, size_t position);
  size_t position() const { return position_; }

private:
  size_t position_;
};

/// Parses the condition language:
///
///   expr   := term (OR term)*
///   term   := factor (AND factor)*
///   factor := NOT factor | '(' expr ')' | portname | true | false
///
/// OR is `or`, `||` or `|`; AND is `and`, `&&` or `&`; NOT is `not`, `!` or
/// `¬`. Blank input is True. Chains of one operator are parsed into a single
/// n-ary node. Quantifiers and any other words are rejected.
BoolExpr parse_condition(std::string_view text);

/// Flattens nested And/Or, folds constants, removes double negation and
/// duplicate operands. Operand order is preserved (first occurrence wins).
BoolExpr normalize(const BoolExpr& e);

/// Keyword rendering with minimal parentheses; parse_condition(render(e))
/// reproduces any normalized e.
std::string render(const BoolExpr& e);

/// Replaces every occurrence of `port` with the constant `value`, normalized.
BoolExpr substitute(const BoolExpr& e, const PortName& port, bool value);

/// Distinct literal ports in order of first appearance.
std::vector<PortName> literals(const BoolExpr& e);

/// Direct evaluation; ports missing from `assignment` are false.
bool evaluate(const BoolExpr& e, const std::map<PortName, bool>& assignment);

}  // namespace portarb

#endif  // PORTARB_BOOL_EXPR_HPP_
