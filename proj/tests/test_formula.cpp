#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bqltl/formula.hpp"
#include "bqltl/trace.hpp"
#include "testutil.hpp"

using namespace bqltl;

TEST_CASE("parse: prefix and matrix") {
  auto f = parse("A{x} E{y} (G (x <-> y))");
  REQUIRE(f.prefix.size() == 2);
  CHECK(!f.prefix[0].exists);
  CHECK(f.prefix[0].vars == VarSet{"x"});
  CHECK(f.prefix[1].exists);
  CHECK(f.prefix[1].vars == VarSet{"y"});
  CHECK(f.matrix->op == MOp::Globally);
  CHECK(f.matrix->lhs->op == MOp::Iff);
}

TEST_CASE("parse: paper footnote formula") {
  auto f = parse("E{y} (G (y & X !y))");
  REQUIRE(f.prefix.size() == 1);
  CHECK(f.prefix[0].exists);
  auto g = f.matrix;
  CHECK(g->op == MOp::Globally);
  CHECK(g->lhs->op == MOp::And);
  CHECK(g->lhs->rhs->op == MOp::Next);
}

TEST_CASE("parse: quantifier inside matrix is rejected") {
  CHECK_THROWS_AS(parse("G (E{y} y)"), ParseError);
  CHECK_THROWS_AS(parse("(E{y} y)"), ParseError);
}

TEST_CASE("parse: rebinding rejected") {
  CHECK_THROWS_AS(parse("E{x} A{x} (x)"), ParseError);
  CHECK_THROWS_AS(parse("E{x,x} (x)"), ParseError);
}

TEST_CASE("parse: syntax errors carry position") {
  try {
    parse("E{y} (y &)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col > 1);
  }
}

TEST_CASE("parse: adjacent same-kind blocks merge") {
  auto f = parse("E{a} E{b} A{x} (a & b & x)");
  REQUIRE(f.prefix.size() == 2);
  CHECK(f.prefix[0].vars == VarSet({"a", "b"}));
}

TEST_CASE("parse: precedence tower") {
  // U binds tighter than &, & tighter than |, -> than <->; !/X/F/G tightest.
  auto f = parse("E{a,b,c} (a U b & c)");
  CHECK(f.matrix->op == MOp::And);
  CHECK(f.matrix->lhs->op == MOp::Until);
  auto g = parse("E{a,b,c} (a | b -> c)");
  CHECK(g.matrix->op == MOp::Implies);
  CHECK(g.matrix->lhs->op == MOp::Or);
  auto h = parse("E{a,b,c} (a <-> b <-> c)");
  CHECK(h.matrix->op == MOp::Iff);
  CHECK(h.matrix->rhs->op == MOp::Iff);  // right-assoc
  auto u = parse("E{a,b,c} (a U b R c)");
  CHECK(u.matrix->op == MOp::Until);
  CHECK(u.matrix->rhs->op == MOp::Release);
  auto n = parse("E{a,b} (!a U X b)");
  CHECK(n.matrix->op == MOp::Until);
  CHECK(n.matrix->lhs->op == MOp::Not);
}

TEST_CASE("free_vars") {
  auto f = parse("A{x} E{y} ((x <-> y) & z)");
  CHECK(free_vars(f) == VarSet{"z"});
  auto g = parse("A{x} E{y} (G x <-> y)");
  CHECK(free_vars(g).empty());
  QuantifiedFormula qf;
  qf.matrix = parse("E{q} (q)").matrix;  // reuse parser for a matrix
  qf.matrix = mk_and(mk_atom("x"), mk_atom("y"));
  CHECK(free_vars(qf) == VarSet({"x", "y"}));
}

TEST_CASE("negate: dual prefix, involutive on prefixes") {
  auto f = parse("A{x} E{y} (x & y)");
  auto n = negate(f);
  REQUIRE(n.prefix.size() == 2);
  CHECK(n.prefix[0].exists);
  CHECK(!n.prefix[1].exists);
  CHECK(n.matrix->op == MOp::Not);
  auto nn = negate(n);
  CHECK(nn.prefix[0].exists == f.prefix[0].exists);
  CHECK(nn.prefix[1].exists == f.prefix[1].exists);

  auto g = parse("E{y} (y)");
  auto ng = negate(g);
  CHECK(!ng.prefix[0].exists);
}

TEST_CASE("to_nnf: dualities") {
  // !(a U b) -> (!a) R (!b)
  auto m = mk_not(mk_until(mk_atom("a"), mk_atom("b")));
  auto n = to_nnf(m);
  CHECK(n->op == MOp::Release);
  CHECK(n->lhs->op == MOp::Not);
  CHECK(n->rhs->op == MOp::Not);

  // !G x -> true U !x
  auto g = to_nnf(mk_not(mk_globally(mk_atom("x"))));
  CHECK(g->op == MOp::Until);
  CHECK(g->lhs->op == MOp::True);
  CHECK(g->rhs->op == MOp::Not);

  // !!x -> x
  auto d = to_nnf(mk_not(mk_not(mk_atom("x"))));
  CHECK(d->op == MOp::Atom);
}

TEST_CASE("classify: fragments and block counts") {
  auto s1 = classify(parse("E{y} A{x} (x & y)"));
  CHECK(s1.tag == FragmentTag::Sigma1);
  CHECK(s1.block_count == 0);

  auto gen = classify(parse("A{x} E{y} (x & y)"));
  CHECK(gen.tag == FragmentTag::General);
  CHECK(gen.block_count == 1);

  auto pond = classify(parse("A{x1} E{y} A{x2} (x1 & y & x2)"));
  CHECK(pond.tag == FragmentTag::General);
  CHECK(pond.block_count == 1);

  CHECK(classify(parse("E{y} (y)")).tag == FragmentTag::Sigma0);
  CHECK(classify(parse("A{x} (x)")).tag == FragmentTag::Pi0);
  CHECK(classify(parse("A{x} A{z} (x & z)")).tag == FragmentTag::Pi0);

  auto deep = classify(parse("A{x1} E{y1} A{x2} E{y2} (x1 & y1 & x2 & y2)"));
  CHECK(deep.block_count == 2);
}

TEST_CASE("classify(negate): Sigma1 dualizes to Pi-shaped prefix") {
  auto f = parse("E{y} A{x} (x & y)");
  auto n = negate(f);
  CHECK(!n.prefix[0].exists);
  CHECK(n.prefix[1].exists);
  CHECK(classify(n).tag == FragmentTag::General);
  CHECK(classify(n).block_count == 1);
}

TEST_CASE("dep: augmented dependency") {
  auto f = parse("A{x} E{y} (x & y)");
  CHECK(dep(f.prefix, 1, {}) == VarSet{"x"});

  auto g = parse("E{y} A{x} (x & y)");
  CHECK(dep(g.prefix, 0, {}).empty());
  CHECK_THROWS(dep(g.prefix, 1, {}));  // not existential

  auto h = parse("A{x1} E{y} A{x2} (x1 & y & x2)");
  CHECK(dep(h.prefix, 1, VarSet{"z"}) == VarSet({"x1", "z"}));
}

TEST_CASE("dep is monotone along the prefix") {
  auto f = parse("E{a} A{x1} E{b} A{x2} E{c} (a & b & c & x1 & x2)");
  VarSet prev;
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    if (!f.prefix[i].exists) continue;
    VarSet d = dep(f.prefix, i, {});
    CHECK(vs_subset(prev, d));
    prev = d;
  }
}

TEST_CASE("print/parse round-trip on random formulas") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    QuantifiedFormula f = test::random_formula(rng, 2, 2, 8);
    auto g = parse(print(f));
    CHECK(matrix_equal(f.matrix, g.matrix));
    REQUIRE(f.prefix.size() == g.prefix.size());
    for (std::size_t b = 0; b < f.prefix.size(); ++b) {
      CHECK(f.prefix[b].exists == g.prefix[b].exists);
      CHECK(f.prefix[b].vars == g.prefix[b].vars);
    }
  }
}

TEST_CASE("nnf preserves evaluation on random lassos") {
  std::mt19937 rng(11);
  VarSet universe{"x", "y"};
  int checked = 0;
  for (int i = 0; i < 250; ++i) {
    MatrixPtr m = test::random_matrix(rng, universe, 8);
    MatrixPtr n = to_nnf(m);
    for (int k = 0; k < 5; ++k) {
      LassoTrace pi = test::random_lasso(rng, universe, 3, 3);
      std::size_t pos = rng() % 4;
      CHECK(eval_ltl(m, pi, pos) == eval_ltl(n, pi, pos));
      ++checked;
    }
  }
  CHECK(checked >= 1000);
}
