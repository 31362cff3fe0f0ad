#include "portarb/bool_expr.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace portarb
{

BoolExpr BoolExpr::constant(bool value)
{
  BoolExpr e;
  e.kind_ = value ? Kind::True : Kind::False;
  return e;
}

BoolExpr BoolExpr::literal(PortName port)
{
  BoolExpr e;
  e.kind_ = Kind::Literal;
  e.port_ = std::move(port);
  return e;
}

BoolExpr BoolExpr::negation(BoolExpr child)
{
  BoolExpr e;
  e.kind_ = Kind::Not;
  e.children_.push_back(std::move(child));
  return e;
}

BoolExpr BoolExpr::conjunction(std::vector<BoolExpr> children)
{
  BoolExpr e;
  e.kind_ = Kind::And;
  e.children_ = std::move(children);
  return e;
}

BoolExpr BoolExpr::disjunction(std::vector<BoolExpr> children)
{
  BoolExpr e;
  e.kind_ = Kind::Or;
  e.children_ = std::move(children);
  return e;
}

ConditionSyntaxError::ConditionSyntaxError(const std::string& message, size_t position)
    : ParseError("condition syntax error at offset " + std::to_string(position) + ": " +
                 message),
      position_(position)
{
}

namespace
{

enum class Tok { And, Or, Not, LParen, RParen, Port, True, False, End };

struct Token
{
  Tok kind;
  size_t pos;
  std::string text;
};

constexpr std::string_view kNotSign = "\xC2\xAC";  // U+00AC

bool is_port_char(char c)
{
  if (std::isspace(static_cast<unsigned char>(c)))
    return false;
  switch (c) {
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

std::vector<Token> tokenize(std::string_view s)
{
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const size_t start = i;
    if (s.substr(i, kNotSign.size()) == kNotSign) {
      out.push_back({Tok::Not, start, "¬"});
      i += kNotSign.size();
    } else if (c == '(') {
      out.push_back({Tok::LParen, start, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, start, ")"});
      ++i;
    } else if (c == '!') {
      out.push_back({Tok::Not, start, "!"});
      ++i;
    } else if (c == '&') {
      i += (i + 1 < s.size() && s[i + 1] == '&') ? 2 : 1;
      out.push_back({Tok::And, start, std::string(s.substr(start, i - start))});
    } else if (c == '|') {
      i += (i + 1 < s.size() && s[i + 1] == '|') ? 2 : 1;
      out.push_back({Tok::Or, start, std::string(s.substr(start, i - start))});
    } else if (c == '/') {
      while (i < s.size() && is_port_char(s[i]) && s.substr(i, kNotSign.size()) != kNotSign)
        ++i;
      std::string text(s.substr(start, i - start));
      if (!PortName::is_valid(text))
        throw ConditionSyntaxError("'" + text + "' is not a valid port name", start);
      if (PortName(text).is_input())
        throw ConditionSyntaxError(
            "literal '" + text + "' names an input port; conditions refer to output ports", start);
      out.push_back({Tok::Port, start, std::move(text)});
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
        ++i;
      std::string word(s.substr(start, i - start));
      if (word == "and")
        out.push_back({Tok::And, start, word});
      else if (word == "or")
        out.push_back({Tok::Or, start, word});
      else if (word == "not")
        out.push_back({Tok::Not, start, word});
      else if (word == "true")
        out.push_back({Tok::True, start, word});
      else if (word == "false")
        out.push_back({Tok::False, start, word});
      else if (word == "forall" || word == "exists")
        throw ConditionSyntaxError("quantifier '" + word + "' is not supported", start);
      else
        throw ConditionSyntaxError("unexpected word '" + word + "'", start);
    } else {
      throw ConditionSyntaxError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

class Parser
{
public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  BoolExpr parse()
  {
    BoolExpr e = expr();
    if (peek().kind != Tok::End)
      throw ConditionSyntaxError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  BoolExpr expr()
  {
    std::vector<BoolExpr> terms{term()};
    while (peek().kind == Tok::Or) {
      next();
      terms.push_back(term());
    }
    return terms.size() == 1 ? std::move(terms.front()) : BoolExpr::disjunction(std::move(terms));
  }

  BoolExpr term()
  {
    std::vector<BoolExpr> factors{factor()};
    while (peek().kind == Tok::And) {
      next();
      factors.push_back(factor());
    }
    return factors.size() == 1 ? std::move(factors.front())
                               : BoolExpr::conjunction(std::move(factors));
  }

  BoolExpr factor()
  {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Not:
        return BoolExpr::negation(factor());
      case Tok::LParen: {
        BoolExpr e = expr();
        if (peek().kind != Tok::RParen)
          throw ConditionSyntaxError("expected ')'", peek().pos);
        next();
        return e;
      }
      case Tok::Port:
        return BoolExpr::literal(PortName(t.text));
      case Tok::True:
        return BoolExpr::constant(true);
      case Tok::False:
        return BoolExpr::constant(false);
      case Tok::End:
        throw ConditionSyntaxError("unexpected end of condition", t.pos);
      default:
        throw ConditionSyntaxError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

void collect_literals(const BoolExpr& e, std::vector<PortName>& out)
{
  if (e.kind() == BoolExpr::Kind::Literal) {
    if (std::find(out.begin(), out.end(), e.port()) == out.end())
      out.push_back(e.port());
    return;
  }
  for (const auto& c : e.children())
    collect_literals(c, out);
}

BoolExpr normalize_nary(BoolExpr::Kind kind, const std::vector<BoolExpr>& children)
{
  const bool is_and = kind == BoolExpr::Kind::And;
  // Identity element for the operator and its absorbing element.
  const BoolExpr::Kind identity = is_and ? BoolExpr::Kind::True : BoolExpr::Kind::False;
  const BoolExpr::Kind absorbing = is_and ? BoolExpr::Kind::False : BoolExpr::Kind::True;

  std::vector<BoolExpr> flat;
  auto add = [&](BoolExpr e) {
    if (std::find(flat.begin(), flat.end(), e) == flat.end())
      flat.push_back(std::move(e));
  };
  for (const auto& child : children) {
    BoolExpr n = normalize(child);
    if (n.kind() == absorbing)
      return n;
    if (n.kind() == identity)
      continue;
    if (n.kind() == kind) {
      for (const auto& grandchild : n.children())
        add(grandchild);
    } else {
      add(std::move(n));
    }
  }
  if (flat.empty())
    return BoolExpr::constant(is_and);
  if (flat.size() == 1)
    return std::move(flat.front());
  return is_and ? BoolExpr::conjunction(std::move(flat)) : BoolExpr::disjunction(std::move(flat));
}

void render_into(const BoolExpr& e, std::string& out)
{
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::True:
      out += "true";
      return;
    case K::False:
      out += "false";
      return;
    case K::Literal:
      out += e.port().str();
      return;
    case K::Not: {
      const BoolExpr& c = e.children().front();
      const bool paren = c.kind() == K::And || c.kind() == K::Or;
      out += "not ";
      if (paren)
        out += '(';
      render_into(c, out);
      if (paren)
        out += ')';
      return;
    }
    case K::And:
    case K::Or: {
      const char* sep = e.kind() == K::And ? " and " : " or ";
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first)
          out += sep;
        first = false;
        // Nested same-kind nodes only occur in unnormalized trees; parenthesize
        // them too so the rendered text keeps the tree shape.
        const bool paren = c.kind() == K::Or || (c.kind() == K::And && e.kind() == K::And);
        if (paren)
          out += '(';
        render_into(c, out);
        if (paren)
          out += ')';
      }
      return;
    }
  }
}

BoolExpr substitute_raw(const BoolExpr& e, const PortName& port, bool value)
{
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::True:
    case K::False:
      return e;
    case K::Literal:
      return e.port() == port ? BoolExpr::constant(value) : e;
    case K::Not:
      return BoolExpr::negation(substitute_raw(e.children().front(), port, value));
    case K::And:
    case K::Or: {
      std::vector<BoolExpr> cs;
      cs.reserve(e.children().size());
      for (const auto& c : e.children())
        cs.push_back(substitute_raw(c, port, value));
      return e.kind() == K::And ? BoolExpr::conjunction(std::move(cs))
                                : BoolExpr::disjunction(std::move(cs));
    }
  }
  return e;
}

}  // namespace

BoolExpr parse_condition(std::string_view text)
{
  std::vector<Token> tokens = tokenize(text);
  if (tokens.size() == 1)
    return BoolExpr::constant(true);
  return Parser(std::move(tokens)).parse();
}

BoolExpr normalize(const BoolExpr& e)
{
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::True:
    case K::False:
    case K::Literal:
      return e;
    case K::Not: {
      BoolExpr c = normalize(e.children().front());
      if (c.kind() == K::True)
        return BoolExpr::constant(false);
      if (c.kind() == K::False)
        return BoolExpr::constant(true);
      if (c.kind() == K::Not)
        return c.children().front();
      return BoolExpr::negation(std::move(c));
    }
    case K::And:
    case K::Or:
      return normalize_nary(e.kind(), e.children());
  }
  return e;
}

std::string render(const BoolExpr& e)
{
  std::string out;
  render_into(e, out);
  return out;
}

BoolExpr substitute(const BoolExpr& e, const PortName& port, bool value)
{
  return normalize(substitute_raw(e, port, value));
}

std::vector<PortName> literals(const BoolExpr& e)
{
  std::vector<PortName> out;
  collect_literals(e, out);
  return out;
}

bool evaluate(const BoolExpr& e, const std::map<PortName, bool>& assignment)
{
  using K = BoolExpr::Kind;
  switch (e.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Literal: {
      auto it = assignment.find(e.port());
      return it != assignment.end() && it->second;
    }
    case K::Not:
      return !evaluate(e.children().front(), assignment);
    case K::And:
      return std::all_of(e.children().begin(), e.children().end(),
                         [&](const BoolExpr& c) { return evaluate(c, assignment); });
    case K::Or:
      return std::any_of(e.children().begin(), e.children().end(),
                         [&](const BoolExpr& c) { return evaluate(c, assignment); });
  }
  return false;
}

}  // namespace portarb
