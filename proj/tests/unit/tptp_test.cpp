#include <gtest/gtest.h>

#include "generators.hpp"
#include "neuconj/tptp/alpha.hpp"
#include "neuconj/tptp/parser.hpp"
#include "neuconj/tptp/printer.hpp"
#include "neuconj/tptp/tokenizer.hpp"

using namespace neuconj::tptp;
using neuconj::testing::FormulaGen;

namespace {

const char* kIdempotence =
    "fof(idempotence_k3_xboole_0, axiom, ![X1]: ![X2]: k3_xboole_0(X1,X1) = X1).";

Formula idempotence_body() {
  return forall("X1", forall("X2", eq(app("k3_xboole_0", {var("X1"), var("X1")}), var("X1"))));
}

}  // namespace

TEST(Parse, IdempotenceAxiom) {
  Problem p = parse_problem(kIdempotence);
  ASSERT_EQ(p.formulas.size(), 1u);
  EXPECT_EQ(p.formulas[0].name, "idempotence_k3_xboole_0");
  EXPECT_EQ(p.formulas[0].role, Role::Axiom);
  EXPECT_EQ(p.formulas[0].formula, idempotence_body());
}

TEST(Parse, EmptyInput) {
  EXPECT_TRUE(parse_problem("").formulas.empty());
  EXPECT_TRUE(parse_problem("  % only a comment\n").formulas.empty());
}

TEST(Parse, BracketedVariableListEqualsNested) {
  auto a = parse_formula("![X1,X2]: q(X1,X2)");
  auto b = parse_formula("![X1]: ![X2]: q(X1,X2)");
  EXPECT_EQ(a, b);
}

TEST(Parse, Precedence) {
  EXPECT_EQ(parse_formula("~ p(a) & r"), conj(neg(atom("p", {app("a")})), atom("r")));
  EXPECT_EQ(parse_formula("p(a) & r => r | p(b)"),
            implies(conj(atom("p", {app("a")}), atom("r")), disj(atom("r"), atom("p", {app("b")}))));
  // Left associative chains.
  EXPECT_EQ(parse_formula("r & r & p(a)"),
            conj(conj(atom("r"), atom("r")), atom("p", {app("a")})));
  // Quantifier bodies are unit formulas.
  EXPECT_EQ(parse_formula("![X]: p(X) & r"), conj(forall("X", atom("p", {var("X")})), atom("r")));
  EXPECT_EQ(parse_formula("~ a = b"), neg(eq(app("a"), app("b"))));
}

TEST(Parse, MixingAndOrIsAnError) {
  EXPECT_THROW(parse_formula("r & r | r"), SyntaxError);
  EXPECT_NO_THROW(parse_formula("(r & r) | r"));
}

TEST(Parse, ImplicationIsNonAssociative) {
  EXPECT_THROW(parse_formula("r => r => r"), SyntaxError);
  EXPECT_THROW(parse_formula("r <=> r => r"), SyntaxError);
  EXPECT_NO_THROW(parse_formula("r => (r => r)"));
}

TEST(Parse, ErrorCarriesPositionAndExpectation) {
  try {
    parse_problem("fof(a, axiom, p(X)).\nfof(b, lemma, r).");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 8);
    EXPECT_EQ(e.found(), "lemma");
    EXPECT_EQ(e.expected().size(), 4u);
  }
  try {
    parse_problem("fof(a, axiom, p(X)");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.found(), "");
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(Parse, AnnotationsAreDiscarded) {
  auto p = parse_problem(
      "fof(c_0_3, plain, ![X1]: p(X1), inference(rw, [status(thm)], [c_0_1, c_0_2])).\n"
      "fof(d1, axiom, r, file('/tmp/x.p', d1), [useful]).");
  ASSERT_EQ(p.formulas.size(), 2u);
  EXPECT_EQ(p.formulas[1].formula, atom("r"));
}

TEST(Parse, CnfAsDisjunction) {
  auto p = parse_problem("cnf ( c_0_6 , plain , ( X1 = k7_zmodul01 ( X4 , X2 ) | v2_struct_0 ( X2 ) ) ) .");
  ASSERT_EQ(p.formulas.size(), 1u);
  EXPECT_EQ(p.formulas[0].language, Language::Cnf);
  EXPECT_EQ(p.formulas[0].formula,
            disj(eq(var("X1"), app("k7_zmodul01", {var("X4"), var("X2")})),
                 atom("v2_struct_0", {var("X2")})));
  EXPECT_FALSE(is_closed(p.formulas[0].formula));
}

TEST(Parse, SplitNotEqualsFromTokenizedProofs) {
  EXPECT_EQ(parse_formula("X1 ! = a"), parse_formula("X1 != a"));
  EXPECT_EQ(parse_formula("X1 != a"), neq(var("X1"), app("a")));
}

TEST(Print, Empty) { EXPECT_EQ(print_problem(Problem{}), ""); }

TEST(Print, IdempotenceAxiom) {
  std::string text = print_problem(parse_problem(kIdempotence));
  EXPECT_NE(text.find("![X1] : ![X2] : k3_xboole_0(X1,X1) = X1"), std::string::npos) << text;
  EXPECT_EQ(text.rfind("fof(", 0), 0u);
}

TEST(RoundTrip, ParsePrintIdentityOnRandomProblems) {
  FormulaGen gen(20240101);
  for (int i = 0; i < 1000; ++i) {
    Problem p = gen.problem();
    const std::string text = print_problem(p);
    ASSERT_EQ(parse_problem(text), p) << text;
  }
}

TEST(Tokenize, DatasetThreeStyle) {
  auto toks = tokenize_tptp("fof(d15_zmodul01,axiom,![X1]:p(X1)).");
  EXPECT_EQ(join_tokens(toks), "fof ( d15_zmodul01 , axiom , ! [ X1 ] : p ( X1 ) ) .");
  EXPECT_TRUE(tokenize_tptp("").empty());
}

TEST(Tokenize, MultiCharacterOperators) {
  EXPECT_EQ(tokenize_tptp("a<=>b=>c!=d~e"),
            (std::vector<std::string>{"a", "<=>", "b", "=>", "c", "!=", "d", "~", "e"}));
  EXPECT_EQ(tokenize_tptp("file('/a b.p',x) $false #"),
            (std::vector<std::string>{"file", "(", "'/a b.p'", ",", "x", ")", "$false", "#"}));
}

TEST(Tokenize, LosslessForParsing) {
  FormulaGen gen(7);
  for (int i = 0; i < 300; ++i) {
    const std::string text = print_problem(gen.problem());
    ASSERT_EQ(parse_problem(join_tokens(tokenize_tptp(text))), parse_problem(text)) << text;
  }
  const std::string commented = "% header\nfof(a, axiom, /* x */ p(a)).\n";
  EXPECT_EQ(parse_problem(join_tokens(tokenize_tptp(commented))), parse_problem(commented));
}

TEST(Alpha, Basics) {
  EXPECT_TRUE(alpha_equal(parse_formula("![X]: p(X)"), parse_formula("![Y]: p(Y)")));
  EXPECT_FALSE(alpha_equal(parse_formula("![X]: p(X)"), parse_formula("![X]: q(X,X)")));
  EXPECT_FALSE(alpha_equal(parse_formula("![X]: ![Y]: q(X,Y)"), parse_formula("![X]: ![Y]: q(Y,X)")));
  EXPECT_TRUE(alpha_equal(parse_formula("![X]: ![X]: p(X)"), parse_formula("![Y]: ![Z]: p(Z)")));
  EXPECT_FALSE(alpha_equal(parse_formula("![X]: p(X)"), parse_formula("?[X]: p(X)")));
}

TEST(Alpha, OpenFormulaIsAnError) {
  EXPECT_THROW(alpha_equal(parse_formula("p(X)"), parse_formula("![X]: p(X)")), OpenFormula);
  EXPECT_THROW(alpha_equal(parse_formula("![X]: p(X)"), parse_formula("q(X, Y)")), OpenFormula);
}

TEST(Alpha, AgreesWithCanonicalRenamingOracle) {
  FormulaGen gen(99);
  int equal_pairs = 0;
  for (int i = 0; i < 1000; ++i) {
    Formula a = gen.closed(3);
    Formula b = (i % 3 == 0) ? neuconj::testing::random_rename(a, gen.rng()) : gen.closed(3);
    const bool oracle = neuconj::testing::oracle_alpha_equal(a, b);
    equal_pairs += oracle;
    ASSERT_EQ(alpha_equal(a, b), oracle) << print_formula(a) << " vs " << print_formula(b);
    ASSERT_EQ(alpha_key(a) == alpha_key(b), oracle);
  }
  EXPECT_GE(equal_pairs, 300);
}

TEST(Alpha, IsAnEquivalenceRelation) {
  FormulaGen gen(5);
  for (int i = 0; i < 300; ++i) {
    Formula a = gen.closed(3);
    Formula b = neuconj::testing::random_rename(a, gen.rng());
    Formula c = neuconj::testing::random_rename(b, gen.rng());
    Formula d = gen.closed(3);
    ASSERT_TRUE(alpha_equal(a, a));
    ASSERT_EQ(alpha_equal(a, d), alpha_equal(d, a));
    ASSERT_TRUE(alpha_equal(a, b) && alpha_equal(b, c));
    ASSERT_TRUE(alpha_equal(a, c));
  }
}

TEST(Ast, ClosureAndFreeVariables) {
  Formula f = parse_formula("q(X, Y) | ![X]: p(X)");
  EXPECT_EQ(free_variables(f), (std::vector<std::string>{"X", "Y"}));
  EXPECT_TRUE(is_closed(universal_closure(f)));
}
