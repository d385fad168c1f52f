#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "neuconj/prefix/codec.hpp"
#include "neuconj/tptp/alpha.hpp"
#include "neuconj/tptp/parser.hpp"
#include "neuconj/tptp/printer.hpp"

using namespace neuconj::prefix;
using namespace neuconj::tptp;
using neuconj::testing::FormulaGen;

namespace {

std::string encode_text(const std::string& formula, SignatureMap& sig) {
  return join_line(encode_formula(parse_formula(formula), sig));
}

DecodeErrorKind decode_error(const std::string& line, const SignatureMap& sig) {
  try {
    decode_tokens(split_line(line), sig);
  } catch (const DecodeError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no decode error for " << line;
  return DecodeErrorKind::MalformedToken;
}

SignatureMap fixture_signature() {
  SignatureMap sig;
  sig.add("k3_xboole_0", SymbolKind::Function, 2);
  sig.add("v2_struct_0", SymbolKind::Predicate, 1);
  sig.add("a", SymbolKind::Function, 0);
  sig.add("p", SymbolKind::Predicate, 0);
  return sig;
}

}  // namespace

TEST(Encode, IdempotenceLineIsExact) {
  SignatureMap sig;
  EXPECT_EQ(encode_text("![X1]: ![X2]: k3_xboole_0(X1,X1) = X1", sig),
            "c! b0 c! b1 c= ck3_xboole_0 b0 b0 b0");
  ASSERT_NE(sig.find("k3_xboole_0"), nullptr);
  EXPECT_EQ(*sig.find("k3_xboole_0"), (SymbolInfo{SymbolKind::Function, 2}));
}

TEST(Encode, NullaryAtomIsOneToken) {
  SignatureMap sig;
  EXPECT_EQ(encode_text("p", sig), "cp");
}

TEST(Encode, ConnectiveConventions) {
  SignatureMap sig;
  EXPECT_EQ(encode_text("?[X]: (p(X) | ~ q(X))", sig), "c? b0 c| cp b0 c~ cq b0");
  EXPECT_EQ(encode_text("(r <=> s) => a != b", sig), "c=> c<=> cr cs c!= ca cb");
  EXPECT_EQ(encode_text("~ (a = b)", sig), "c~ c= ca cb");
}

TEST(Encode, ArityConflictLeavesSignatureUntouched) {
  SignatureMap sig = fixture_signature();
  const SignatureMap before = sig;
  EXPECT_THROW(encode_text("![X]: (q(X) & v2_struct_0(X, X))", sig), ArityConflict);
  EXPECT_EQ(sig, before);
  EXPECT_THROW(encode_text("v2_struct_0(k3_xboole_0(a))", sig), ArityConflict);
  EXPECT_THROW(encode_text("k3_xboole_0(a, a)", sig), KindConflict);
}

TEST(Encode, OpenFormulaRejected) {
  SignatureMap sig;
  EXPECT_THROW(encode_text("p(X)", sig), OpenFormula);
}

TEST(Decode, IdempotenceLine) {
  SignatureMap sig;
  sig.add("k3_xboole_0", SymbolKind::Function, 2);
  Formula f = decode_tokens(split_line("c! b0 c! b1 c= ck3_xboole_0 b0 b0 b0"), sig);
  EXPECT_EQ(print_formula(f), "![X0] : ![X1] : k3_xboole_0(X0,X0) = X0");
}

TEST(Decode, Errors) {
  const SignatureMap sig = fixture_signature();
  EXPECT_EQ(decode_error("c= ck3_xboole_0 b0", sig), DecodeErrorKind::TruncatedStream);
  EXPECT_EQ(decode_error("", sig), DecodeErrorKind::TruncatedStream);
  EXPECT_EQ(decode_error("c= cq b0", sig), DecodeErrorKind::UnknownSymbol);
  EXPECT_EQ(decode_error("cp cp", sig), DecodeErrorKind::TrailingTokens);
  EXPECT_EQ(decode_error("c! cp cp", sig), DecodeErrorKind::MalformedVariable);
  EXPECT_EQ(decode_error("c! b1 cp", sig), DecodeErrorKind::MalformedVariable);
  EXPECT_EQ(decode_error("c! b0 cv2_struct_0 b1", sig), DecodeErrorKind::MalformedVariable);
  EXPECT_EQ(decode_error("b0", sig), DecodeErrorKind::MalformedVariable);
  EXPECT_EQ(decode_error("ca", sig), DecodeErrorKind::KindMismatch);
  EXPECT_EQ(decode_error("cv2_struct_0 cp", sig), DecodeErrorKind::KindMismatch);
  EXPECT_EQ(decode_error("c= c& ca", sig), DecodeErrorKind::KindMismatch);
  EXPECT_EQ(decode_error("c= ca x1", sig), DecodeErrorKind::MalformedToken);
  EXPECT_EQ(decode_error("c! bx cp", sig), DecodeErrorKind::MalformedToken);
}

TEST(Signature, BuildExamples) {
  EXPECT_TRUE(build_signature({}).empty());

  std::vector<Problem> one{parse_problem(
      "fof(idempotence_k3_xboole_0, axiom, ![X1]: ![X2]: k3_xboole_0(X1,X1) = X1).")};
  SignatureMap sig = build_signature(one);
  ASSERT_EQ(sig.size(), 1u);
  EXPECT_EQ(*sig.find("k3_xboole_0"), (SymbolInfo{SymbolKind::Function, 2}));

  std::vector<Problem> conflicting{parse_problem("fof(x, axiom, p(a))."),
                                   parse_problem("fof(y, axiom, p(a, b)).")};
  for (int order = 0; order < 2; ++order) {
    try {
      build_signature(conflicting);
      FAIL() << "expected ArityConflict";
    } catch (const ArityConflict& e) {
      EXPECT_EQ(e.symbol(), "p");
      EXPECT_EQ(e.first(), 1u);
      EXPECT_EQ(e.second(), 2u);
    }
    std::reverse(conflicting.begin(), conflicting.end());
  }
}

TEST(Signature, DeterministicAcrossInputOrder) {
  FormulaGen gen(3);
  std::vector<Problem> problems;
  for (int i = 0; i < 20; ++i) problems.push_back(gen.problem());
  const SignatureMap forward = build_signature(problems);
  std::reverse(problems.begin(), problems.end());
  EXPECT_EQ(build_signature(problems), forward);
  EXPECT_EQ(build_signature(problems).to_text(), forward.to_text());
}

TEST(Signature, TextFormatRoundTrip) {
  SignatureMap sig = fixture_signature();
  EXPECT_EQ(sig.to_text(),
            "a function 0\nk3_xboole_0 function 2\np predicate 0\nv2_struct_0 predicate 1\n");
  EXPECT_EQ(SignatureMap::from_text(sig.to_text()), sig);
  EXPECT_THROW(SignatureMap::from_text("p relation 2\n"), neuconj::IoError);
  EXPECT_THROW(sig.add("=>", SymbolKind::Predicate, 2), neuconj::Error);
}

TEST(RoundTrip, DecodeEncodeAlphaIdentity) {
  FormulaGen gen(42);
  SignatureMap sig;
  for (int i = 0; i < 1000; ++i) {
    Formula f = gen.closed(4);
    TokenLine line = encode_formula(f, sig);
    Formula back = decode_tokens(line, sig);
    ASSERT_TRUE(neuconj::testing::oracle_alpha_equal(f, back)) << print_formula(f);
    ASSERT_TRUE(alpha_equal(f, back));
  }
}

TEST(RoundTrip, PrefixFreeness) {
  FormulaGen gen(11);
  SignatureMap sig;
  for (int i = 0; i < 300; ++i) {
    TokenLine line = encode_formula(gen.closed(3), sig);
    for (std::size_t n = 0; n < line.size(); ++n) {
      std::span<const std::string> prefix(line.data(), n);
      ASSERT_THROW(decode_tokens(prefix, sig), DecodeError) << join_line(line) << " @" << n;
    }
  }
}

TEST(RoundTrip, EncodingInjectiveUpToAlpha) {
  FormulaGen gen(13);
  SignatureMap sig;
  std::vector<std::pair<std::string, Formula>> seen;
  for (int i = 0; i < 600; ++i) {
    Formula f = i % 4 == 0 && !seen.empty()
                    ? neuconj::testing::random_rename(seen[gen.pick(seen.size())].second, gen.rng())
                    : gen.closed(2);
    seen.emplace_back(join_line(encode_formula(f, sig)), f);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    for (std::size_t j = i + 1; j < seen.size(); ++j) {
      if (seen[i].first == seen[j].first) {
        ASSERT_TRUE(neuconj::testing::oracle_alpha_equal(seen[i].second, seen[j].second));
      }
    }
  }
}

TEST(RoundTrip, VariableLevelsBoundedByBinderDepth) {
  FormulaGen gen(17);
  SignatureMap sig;
  for (int i = 0; i < 300; ++i) {
    TokenLine line = encode_formula(gen.closed(4), sig);
    // Track binder depth along the pre-order walk: each binder is the next
    // level, so a variable token may never exceed the highest binder seen.
    long max_binder = -1;
    for (std::size_t k = 0; k < line.size(); ++k) {
      if (line[k] == "c!" || line[k] == "c?") {
        const long level = std::stol(line[k + 1].substr(1));
        ASSERT_LE(level, max_binder + 1);
        max_binder = std::max(max_binder, level);
        ++k;
      } else if (line[k][0] == 'b') {
        ASSERT_LE(std::stol(line[k].substr(1)), max_binder);
      }
    }
  }
}
