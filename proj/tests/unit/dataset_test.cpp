#include <gtest/gtest.h>

#include <filesystem>

#include "neuconj/dataset/builders.hpp"
#include "neuconj/prefix/codec.hpp"
#include "neuconj/tptp/alpha.hpp"
#include "neuconj/tptp/parser.hpp"
#include "neuconj/tptp/tokenizer.hpp"

using namespace neuconj;
using namespace neuconj::dataset;

namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
  return std::string(NEUCONJ_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST(Concatenated, StripsComments) {
  EXPECT_EQ(build_concatenated({"theorem :: label\n  x = x;"}), "theorem\n  x = x;");
  EXPECT_EQ(build_concatenated({}), "");
}

TEST(Concatenated, ThreeFileGolden) {
  const std::vector<std::string> files{read_file(fixture("articles/a1.miz")),
                                       read_file(fixture("articles/a2.miz")),
                                       read_file(fixture("articles/a3.miz"))};
  EXPECT_EQ(build_concatenated(files), read_file(fixture("articles/golden.txt")));
}

TEST(Concatenated, Idempotent) {
  const std::vector<std::string> files{read_file(fixture("articles/a1.miz")),
                                       read_file(fixture("articles/a2.miz")),
                                       read_file(fixture("articles/a3.miz"))};
  const std::string once = build_concatenated(files);
  EXPECT_EQ(build_concatenated({once}), once);
  EXPECT_EQ(build_concatenated({once + "\n"}), once);
}

TEST(TokenizedProofs, OneStatement) {
  EXPECT_EQ(build_tokenized_proofs({"fof(d15_zmodul01,axiom,![X1]:p(X1))."}),
            "fof ( d15_zmodul01 , axiom , ! [ X1 ] : p ( X1 ) ) .");
  EXPECT_EQ(build_tokenized_proofs({}), "");
}

TEST(TokenizedProofs, GoldenFromIndependentTokenization) {
  const std::string derivation = read_file(fixture("t103_zmodul01.tstp"));
  const std::string built = build_tokenized_proofs({derivation, derivation});
  EXPECT_EQ(built, read_file(fixture("t103_zmodul01.tokens")));
  // Every emitted line is one statement and parses to the same statement.
  const std::string first_block = built.substr(0, built.find("\n\n"));
  std::size_t lines = 1 + std::count(first_block.begin(), first_block.end(), '\n');
  EXPECT_EQ(lines, 7u);
}

TEST(PremiseOrder, DedupPreservesOrder) {
  const std::string d =
      "fof(a, axiom, r). fof(b, axiom, r). fof(a, axiom, r). fof(c, axiom, r)."
      "fof(t, conjecture, r).";
  ProofManifest m = extract_premise_order(d);
  EXPECT_EQ(m.conjecture_name, "t");
  EXPECT_EQ(m.ordered_premises, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(PremiseOrder, OnlyConjecture) {
  ProofManifest m = extract_premise_order("fof(t, conjecture, r).");
  EXPECT_TRUE(m.ordered_premises.empty());
  EXPECT_THROW(extract_premise_order("fof(a, axiom, r)."), NoConjecture);
}

TEST(PremiseOrder, NegatedConjectureFallback) {
  ProofManifest m = extract_premise_order(
      "fof(a, axiom, r).\n"
      "fof(c_0_1, negated_conjecture, ~ r, inference(assume_negation,[status(cth)],[t_x])).");
  EXPECT_EQ(m.conjecture_name, "t_x");
  EXPECT_EQ(m.ordered_premises, (std::vector<std::string>{"a"}));
}

TEST(PremiseOrder, FiveAxiomFixtureMatchesHandReading) {
  ProofManifest m = extract_premise_order(read_file(fixture("five_axioms.tstp")));
  EXPECT_EQ(m.conjecture_name, "t_goal");
  EXPECT_EQ(m.ordered_premises,
            (std::vector<std::string>{"ax_b", "ax_d", "ax_a", "ax_e", "ax_c"}));
}

TEST(PrefixPremiseFile, ConjectureFirstLayout) {
  const auto problems = load_problems(fixture("zmodul01.ax"));
  const FormulaLibrary lib = FormulaLibrary::from_problems(problems);
  prefix::SignatureMap sig = prefix::build_signature(problems);

  ProofManifest m = extract_premise_order(read_file(fixture("t103_zmodul01.tstp")));
  EXPECT_EQ(m.conjecture_name, "t103_zmodul01");
  EXPECT_EQ(m.ordered_premises,
            (std::vector<std::string>{"d15_zmodul01", "idempotence_k3_xboole_0"}));

  const std::string text = build_prefix_premise_file(m, lib, sig);
  std::vector<std::string> lines;
  for (std::size_t s = 0, e; (e = text.find('\n', s)) != std::string::npos; s = e + 1) {
    lines.push_back(text.substr(s, e - s));
  }
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[2], "c! b0 c! b1 c= ck3_xboole_0 b0 b0 b0");
  EXPECT_EQ(lines[0].rfind("c! b0 c=> c& c~ cv2_struct_0 b0 c& cv13_algstr_0 b0 c& cv2_rlvect_1 b0", 0), 0u);
  EXPECT_EQ(lines[1].rfind("c! b0 c=> c& c~ cv2_struct_0 b0 c& cv13_algstr_0 b0 c& cv2_rlvect_1 b0", 0), 0u);

  // Every line decodes back to its library formula.
  const std::vector<std::string> names{"t103_zmodul01", "d15_zmodul01", "idempotence_k3_xboole_0"};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto f = prefix::decode_tokens(prefix::split_line(lines[i]), sig);
    EXPECT_TRUE(tptp::alpha_equal(f, lib.at(names[i]).formula));
    EXPECT_EQ(prefix::join_line(prefix::encode_formula(f, sig)), lines[i]);
  }

  EXPECT_EQ(build_prefix_premise_file({"idempotence_k3_xboole_0", {}}, lib, sig),
            "c! b0 c! b1 c= ck3_xboole_0 b0 b0 b0\n");
  EXPECT_THROW(build_prefix_premise_file({"t103_zmodul01", {"nope"}}, lib, sig), UnknownName);
}

TEST(Dataset4, DirectoryBuildIsDeterministic) {
  const fs::path tmp = fs::temp_directory_path() / "neuconj_dataset4_test";
  fs::remove_all(tmp);
  fs::create_directories(tmp / "derivations");
  fs::copy_file(fixture("t103_zmodul01.tstp"), tmp / "derivations" / "t103.out");
  write_file((tmp / "derivations" / "broken.out").string(), "fof(a, axiom, r).");

  auto run = [&](const std::string& out) {
    return build_dataset4(fixture("zmodul01.ax"), (tmp / "derivations").string(),
                          (tmp / (out + ".sig")).string(), (tmp / out).string());
  };
  auto s1 = run("out1");
  auto s2 = run("out2");
  EXPECT_EQ(s1.files_written, 1u);
  ASSERT_EQ(s1.skipped.size(), 1u);
  EXPECT_NE(s1.skipped[0].find("broken.out"), std::string::npos);
  EXPECT_EQ(read_file((tmp / "out1" / "t103_zmodul01").string()),
            read_file((tmp / "out2" / "t103_zmodul01").string()));
  EXPECT_EQ(read_file((tmp / "out1.sig").string()), read_file((tmp / "out2.sig").string()));

  // Every emitted line decodes under the written signature.
  auto sig = prefix::load_signature((tmp / "out1.sig").string());
  const std::string text = read_file((tmp / "out1" / "t103_zmodul01").string());
  for (std::size_t s = 0, e; (e = text.find('\n', s)) != std::string::npos; s = e + 1) {
    EXPECT_NO_THROW(prefix::decode_tokens(prefix::split_line(text.substr(s, e - s)), sig));
  }
  (void)s2;
  fs::remove_all(tmp);
}
