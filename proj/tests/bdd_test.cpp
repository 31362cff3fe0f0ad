#include <gtest/gtest.h>

#include <random>

#include "portarb/bdd.hpp"
#include "support/expr_oracle.hpp"

using namespace portarb;

namespace
{

const PortName kRest("/RestArm/pos:o");
const PortName kObj("/Object/pos:o");
const PortName kCol("/collision:o");

// Walks the diagram for one assignment without going through evaluate().
bool walk(const BddManager& m, NodeRef n, const std::vector<PortName>& vars, uint32_t bits)
{
  while (!m.is_terminal(n)) {
    const PortName& p = m.variable_order()[m.level(n)];
    size_t i = 0;
    while (i < vars.size() && !(vars[i] == p))
      ++i;
    const bool v = i < vars.size() && ((bits >> i) & 1u);
    n = v ? m.high(n) : m.low(n);
  }
  return n == kTrueNode;
}

}  // namespace

TEST(Bdd, VariablesAreHashConsed)
{
  BddManager m;
  const NodeRef x = m.var(kObj);
  EXPECT_EQ(m.var(kObj), x);
  EXPECT_NE(m.var(kCol), x);
  EXPECT_EQ(m.variable_order().size(), 2u);
  EXPECT_EQ(*m.variable_index(kCol), 1u);
  EXPECT_FALSE(m.variable_index(kRest).has_value());
  EXPECT_EQ(m.low(x), kFalseNode);
  EXPECT_EQ(m.high(x), kTrueNode);
}

TEST(Bdd, TerminalIdentities)
{
  BddManager m;
  const NodeRef x = m.var(kObj);
  EXPECT_EQ(m.combine(BddOp::And, x, m.negate(x)), kFalseNode);
  EXPECT_EQ(m.combine(BddOp::Or, x, m.negate(x)), kTrueNode);
  EXPECT_EQ(m.combine(BddOp::Or, x, kTrueNode), kTrueNode);
  EXPECT_EQ(m.combine(BddOp::And, x, kTrueNode), x);
  EXPECT_EQ(m.combine(BddOp::And, x, kFalseNode), kFalseNode);
  EXPECT_EQ(m.negate(m.negate(x)), x);
  EXPECT_EQ(m.build(BoolExpr::constant(true)), kTrueNode);
  EXPECT_EQ(m.build(BoolExpr::constant(false)), kFalseNode);
}

TEST(Bdd, RestArmChain)
{
  BddManager m;
  const NodeRef r = m.build(parse_condition("/RestArm/pos:o and not /Object/pos:o and not /collision:o"));
  // One internal node per variable, laid out as a chain.
  NodeRef n = r;
  for (size_t level = 0; level < 3; ++level) {
    ASSERT_FALSE(m.is_terminal(n));
    EXPECT_EQ(m.level(n), level);
    const bool positive = level == 0;
    EXPECT_EQ(positive ? m.low(n) : m.high(n), kFalseNode);
    n = positive ? m.high(n) : m.low(n);
  }
  EXPECT_EQ(n, kTrueNode);
  const std::vector<PortName> vars{kRest, kObj, kCol};
  for (uint32_t bits = 0; bits < 8; ++bits)
    EXPECT_EQ(m.evaluate(r, testkit::assignment_of(vars, bits)), bits == 1u) << bits;
}

TEST(Bdd, EvaluateExamples)
{
  BddManager m;
  const NodeRef obj = m.build(parse_condition("/Object/pos:o and not /collision:o"));
  EXPECT_TRUE(m.evaluate(obj, {{kObj, true}, {kCol, false}}));
  EXPECT_FALSE(m.evaluate(obj, {{kObj, true}, {kCol, true}}));
  EXPECT_TRUE(m.evaluate(obj, {{kObj, true}}));  // absent reads false
  EXPECT_FALSE(m.evaluate(obj, {}));
}

TEST(Bdd, Satisfiability)
{
  BddManager m;
  EXPECT_FALSE(m.satisfiable(kFalseNode));
  EXPECT_TRUE(m.satisfiable(m.var(kObj)));
  // The two arm rules can never both hold.
  const NodeRef a = m.build(parse_condition("/Object/pos:o and not /collision:o"));
  const NodeRef b = m.build(parse_condition("/RestArm/pos:o and not /Object/pos:o"));
  EXPECT_FALSE(m.satisfiable(m.combine(BddOp::And, a, b)));
  EXPECT_FALSE(m.min_satisfying(kFalseNode).has_value());
}

TEST(Bdd, MinSatisfyingMatchesBruteForce)
{
  std::mt19937 rng(99);
  const auto vars = testkit::make_ports(5);
  for (int i = 0; i < 200; ++i) {
    BddManager m;
    for (const auto& v : vars)
      m.var(v);
    const BoolExpr e = testkit::random_expr(rng, vars, 4);
    const NodeRef n = m.build(e);
    // Least assignment in variable order, false before true: vars[0] is
    // the most significant position.
    std::optional<uint32_t> best;
    for (uint32_t k = 0; k < 32 && !best; ++k) {
      uint32_t bits = 0;
      for (size_t j = 0; j < 5; ++j)
        if ((k >> (4 - j)) & 1u)
          bits |= 1u << j;
      if (testkit::oracle_eval(e, vars, bits))
        best = bits;
    }
    const auto got = m.min_satisfying(n);
    ASSERT_EQ(got.has_value(), best.has_value());
    if (best)
      ASSERT_EQ(*got, testkit::assignment_of(vars, *best));
  }
}

TEST(Bdd, AgreesWithTruthTableOracle)
{
  std::mt19937 rng(2014);
  for (int i = 0; i < 600; ++i) {
    const auto vars = testkit::make_ports(1 + i % 8);
    const BoolExpr e = testkit::random_expr(rng, vars, 5);
    BddManager m;
    const NodeRef n = m.build(e);
    for (uint32_t bits = 0; bits < (1u << vars.size()); ++bits) {
      const bool want = testkit::oracle_eval(e, vars, bits);
      ASSERT_EQ(walk(m, n, vars, bits), want);
      ASSERT_EQ(m.evaluate(n, testkit::assignment_of(vars, bits)), want);
    }
    ASSERT_TRUE(m.check_invariants());
  }
}

TEST(Bdd, CanonicalForEquivalentExpressions)
{
  std::mt19937 rng(5);
  const auto vars = testkit::make_ports(4);
  BddManager m;
  for (const auto& v : vars)
    m.var(v);
  std::map<std::vector<bool>, NodeRef> seen;
  for (int i = 0; i < 1000; ++i) {
    const BoolExpr e = testkit::random_expr(rng, vars, 4);
    const NodeRef n = m.build(e);
    const auto [it, fresh] = seen.emplace(testkit::truth_table(e, vars), n);
    if (!fresh)
      ASSERT_EQ(it->second, n) << render(e);
  }
  // Distinct functions got distinct nodes.
  std::set<NodeRef> nodes;
  for (const auto& [_, n] : seen)
    nodes.insert(n);
  EXPECT_EQ(nodes.size(), seen.size());
  EXPECT_TRUE(m.check_invariants());
}

TEST(Bdd, DeMorganAndCommutativity)
{
  BddManager m;
  const NodeRef a = m.var(kObj), b = m.var(kCol);
  EXPECT_EQ(m.negate(m.combine(BddOp::And, a, b)),
            m.combine(BddOp::Or, m.negate(a), m.negate(b)));
  EXPECT_EQ(m.combine(BddOp::Or, a, b), m.combine(BddOp::Or, b, a));
}

TEST(Bdd, CacheIsTransparent)
{
  std::mt19937 rng(11);
  const auto vars = testkit::make_ports(6);
  BddManager cached, plain;
  plain.set_cache_enabled(false);
  for (int i = 0; i < 200; ++i) {
    const BoolExpr e = testkit::random_expr(rng, vars, 4);
    ASSERT_EQ(cached.build(e), plain.build(e));
  }
  EXPECT_EQ(cached.node_count(), plain.node_count());
}

TEST(Bdd, DotOutput)
{
  BddManager m;
  const NodeRef r = m.build(parse_condition("/Object/pos:o and not /collision:o"));
  const std::string dot = m.to_dot(r, "arm");
  EXPECT_EQ(dot.rfind("digraph \"arm\" {", 0), 0u);
  EXPECT_NE(dot.find("/Object/pos:o"), std::string::npos);
  EXPECT_NE(dot.find("/collision:o"), std::string::npos);
  EXPECT_NE(dot.find("style=dashed"), std::string::npos);
}
