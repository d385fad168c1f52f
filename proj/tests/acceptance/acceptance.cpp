// Acceptance suite: one PASS / FAIL / SKIP line per criterion. Exits nonzero
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "eval_support.hpp"
#include "generators.hpp"
#include "lm_support.hpp"
#include "neuconj/eval/evaluate.hpp"
#include "neuconj/lm/corpus.hpp"
#include "neuconj/lm/decode.hpp"
#include "neuconj/lm/train.hpp"
#include "neuconj/prefix/codec.hpp"
#include "neuconj/tptp/alpha.hpp"
#include "neuconj/tptp/parser.hpp"
#include "neuconj/tptp/printer.hpp"

using namespace neuconj;
using neuconj::testing::FormulaGen;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

Verdict pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::Fail, std::move(d)}; }
Verdict check(bool ok, std::string d) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(d)}; }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- criteria ------------------------------------------------------------

Verdict prefix_exactness() {
  prefix::SignatureMap sig;
  const std::string got = prefix::join_line(
      prefix::encode_formula(tptp::parse_formula("![X1]: ![X2]: k3_xboole_0(X1,X1) = X1"), sig));
  const std::string want = "c! b0 c! b1 c= ck3_xboole_0 b0 b0 b0";
  return check(got == want, "'" + got + "'");
}

Verdict round_trip_suites() {
  FormulaGen gen(20240101);
  std::size_t parse_print = 0, decode_encode = 0;
  for (int i = 0; i < 1000; ++i) {
    const tptp::Problem p = gen.problem();
    if (tptp::parse_problem(tptp::print_problem(p)) != p) {
      return fail("parse(print(p)) != p for " + tptp::print_problem(p));
    }
    ++parse_print;
  }
  prefix::SignatureMap sig;
  for (int i = 0; i < 1000; ++i) {
    const tptp::Formula f = gen.closed(4);
    const tptp::Formula back = prefix::decode_tokens(prefix::encode_formula(f, sig), sig);
    if (!neuconj::testing::oracle_alpha_equal(f, back)) {
      return fail("decode(encode(f)) not alpha-equal for " + tptp::print_formula(f));
    }
    ++decode_encode;
  }
  return pass(std::to_string(parse_print) + " problems parse/print, " + std::to_string(decode_encode) +
              " formulas decode/encode");
}

Verdict lm_gradient_check() {
  double worst = 0;
  std::string where;
  for (const auto& [name, err] : neuconj::testing::gradient_check_errors()) {
    if (err >= worst) {
      worst = err;
      where = name;
    }
  }
  return check(worst < 1e-4, fmt("max relative error %.2e", worst) + " (" + where + ")");
}

struct StopTraining {};

Verdict lm_learning_check() {
  using namespace lm;
  const auto corpus = neuconj::testing::three_state_corpus(50000, 1, kNumReserved);
  const auto held_out = neuconj::testing::three_state_corpus(5000, 2, kNumReserved);
  const double baseline = neuconj::testing::unigram_entropy(held_out);
  ModelConfig c;
  c.layers = 2;
  c.heads = 2;
  c.model_dim = 32;
  c.ff_dim = 64;
  c.context_length = 32;
  c.vocab_size = kNumReserved + 6;
  c.seed = 1;
  Transformer<float> m(c);
  TrainConfig tc;
  tc.steps = 2000;
  tc.batch_size = 4;
  tc.learning_rate = 3e-3;
  double loss = 0;
  std::size_t reached = 0;
  try {
    train(m, corpus, tc, [&](const LossPoint& pt) {
      if (pt.step % 50 != 0) return;
      loss = evaluate_loss(m, std::span<const int>(held_out));
      if (loss < baseline) {
        reached = pt.step;
        throw StopTraining{};
      }
    });
  } catch (const StopTraining&) {
  }
  if (!reached) return fail(fmt("held-out %.4f not below unigram %.4f after 2000 steps", loss, baseline));
  return pass(fmt("held-out %.4f < unigram %.4f at step %.0f", loss, baseline, double(reached)));
}

Verdict decoding_identities() {
  using namespace lm;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    ModelConfig c;
    c.layers = 2;
    c.heads = 2;
    c.model_dim = 16;
    c.ff_dim = 32;
    c.context_length = 24;
    c.vocab_size = 15;
    c.seed = seed;
    Transformer<float> m(c, 0.5);
    const std::vector<int> prompt{1, static_cast<int>(5 + seed % 10)};
    DecodeParams p;
    p.max_new_tokens = 16;
    p.stop_tokens = {EOS};
    const auto g = greedy(m, prompt, p);
    DecodeParams b = p;
    b.mode = DecodeMode::Beam;
    const auto beams = beam_search(m, prompt, b);
    if (beams.size() != 1 || beams[0].tokens != g) return fail("beam_width=1 differs from greedy");
    for (double t : {0.3, 1.0, 3.0}) {
      DecodeParams k = p;
      k.top_k = 1;
      k.temperature = t;
      k.seed = seed * 7 + 1;
      if (sample(m, prompt, k) != g) return fail("top_k=1 differs from greedy");
    }
  }
  const auto m = neuconj::testing::three_token_model();
  std::vector<std::pair<double, std::vector<int>>> all;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) all.push_back({std::log(m.prob(0, a)) + std::log(m.prob(a, b)), {a, b}});
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  DecodeParams p;
  p.mode = DecodeMode::Beam;
  p.beam_width = 2;
  p.max_new_tokens = 2;
  const auto beams = beam_search(m, std::vector<int>{0}, p);
  if (beams.size() != 2) return fail("beam returned " + std::to_string(beams.size()) + " hypotheses");
  for (std::size_t i = 0; i < 2; ++i) {
    if (beams[i].tokens != all[i].second || std::abs(beams[i].score - all[i].first) > 1e-12) {
      return fail("beam top-2 differs from exhaustive enumeration");
    }
  }
  return pass("8 random models: beam1 = top_k1 = greedy; top-2 beams [1,0] [0,0] exact");
}

struct SyntheticSetup {
  std::vector<tptp::Problem> problems;
  FormulaLibrary lib;
  prefix::SignatureMap sig;
  SyntheticSetup(std::size_t n, std::uint64_t seed)
      : problems{neuconj::testing::synthetic_library_problem(n, seed)},
        lib(FormulaLibrary::from_problems(problems)),
        sig(prefix::build_signature(problems)) {}
};

Verdict harness_oracle_equivalence() {
  std::size_t predictions = 0, proved = 0, cs = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    SyntheticSetup s(50, 500 + seed);
    const auto preds = neuconj::testing::random_predictions(s.lib, s.sig, 400, seed);
    eval::EvalOptions o;
    o.jobs = 2;
    const auto got = eval::evaluate(preds, s.lib, s.sig, eval::StubProver{}, o).report;
    const auto want = neuconj::testing::brute_force_report(preds, s.lib, s.sig);
    if (!(got == want)) {
      return fail("seed " + std::to_string(seed) + ": " + eval::report_json(got) + " vs " +
                  eval::report_json(want));
    }
    predictions += preds.size();
    proved += got.verdicts.proved;
    cs += got.verdicts.countersatisfiable;
  }
  return pass(std::to_string(predictions) + " predictions over 3 libraries of 50; " +
              std::to_string(proved) + " proved, " + std::to_string(cs) + " countersatisfiable");
}

Verdict self_premise_removal() {
  std::size_t problems = 0, proposed = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSetup s(60, 900 + seed);
    for (const auto& p : neuconj::testing::random_predictions(s.lib, s.sig, 200, seed)) {
      if (!s.lib.find(p.conjecture_name)) continue;
      std::vector<eval::PremiseClass> classes;
      for (const auto& l : p.lines) classes.push_back(eval::classify_premise(eval::decode_line(l, s.sig), s.lib));
      for (bool strict : {false, true}) {
        eval::AssembleOptions ao;
        ao.strict_chronology = strict;
        const auto a = eval::assemble_problem(p.conjecture_name, classes, s.lib, ao);
        const tptp::Formula& goal = s.lib.at(p.conjecture_name).formula;
        for (const auto& f : a.problem.formulas) {
          if (f.role == tptp::Role::Axiom && neuconj::testing::oracle_alpha_equal(f.formula, goal)) {
            return fail(p.conjecture_name + " kept axiom " + f.name);
          }
        }
        ++problems;
        proposed += a.proposed_self;
      }
    }
  }
  return pass(std::to_string(problems) + " assembled problems, " + std::to_string(proposed) +
              " proposed the conjecture, none kept it");
}

// Premise files for a synthetic library: each theorem's line, then 1-3
// earlier entries as its premises.
std::vector<std::string> synthetic_dataset4(const SyntheticSetup& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  prefix::SignatureMap sig = s.sig;
  auto line = [&](const LibraryEntry& e) { return prefix::join_line(prefix::encode_formula(e.formula, sig)); };
  std::vector<std::string> docs;
  const auto& entries = s.lib.entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    std::string doc = line(entries[i]);
    const std::size_t k = 1 + i % 3;
    for (std::size_t j = 0; j < k; ++j) doc += "\n" + line(entries[rng() % i]);
    docs.push_back(doc);
  }
  return docs;
}

struct ClassCounts {
  std::size_t known = 0, fresh = 0, unparsable = 0;
  std::size_t total() const { return known + fresh + unparsable; }
  double frac(std::size_t n) const { return total() ? double(n) / double(total()) : 0; }
};

Verdict temperature_regime() {
  using namespace lm;
  SyntheticSetup s(200, 77);
  const auto docs = synthetic_dataset4(s, 5);
  const auto vocab = Vocabulary::build(tokenize_documents(docs, TokenizerKind::Whitespace),
                                       TokenizerKind::Whitespace);
  const auto corpus = encode_corpus(docs, vocab);

  ModelConfig c;
  c.layers = 2;
  c.heads = 4;
  c.model_dim = 64;
  c.ff_dim = 128;
  c.context_length = 96;
  c.vocab_size = vocab.size();
  c.seed = 11;
  Transformer<float> m(c);
  TrainConfig tc;
  tc.steps = 800;
  tc.batch_size = 8;
  tc.learning_rate = 3e-3;
  tc.seed = 12;
  const auto trace = train(m, corpus, tc);

  prefix::SignatureMap sig = s.sig;
  std::vector<std::vector<int>> prompts;
  for (const auto& e : s.lib.entries()) {
    std::vector<int> ids{BOS};
    for (int id : vocab.encode(prefix::encode_formula(e.formula, sig))) ids.push_back(id);
    ids.push_back(NEWLINE);
    if (ids.size() + 16 <= c.context_length) prompts.push_back(std::move(ids));
  }
  if (prompts.empty()) return fail("no conjecture fits the context");

  constexpr std::size_t kSamples = 200;
  auto run = [&](double temperature) {
    ClassCounts counts;
    DecodeParams p;
    p.temperature = temperature;
    p.max_new_tokens = 64;
    p.stop_tokens = {EOS};
    p.suppressed_tokens = {PAD, BOS, UNK};
    for (std::size_t i = 0; i < kSamples; ++i) {
      p.seed = 1000 + i;
      auto out = sample(m, prompts[i % prompts.size()], p);
      if (!out.empty() && out.back() == EOS) out.pop_back();
      std::string text = vocab.decode(out);
      std::size_t start = 0;
      while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string l = text.substr(start, end - start);
        start = end + 1;
        if (l.find_first_not_of(' ') == std::string::npos) continue;
        const auto cls = eval::classify_premise(eval::decode_line(l, s.sig), s.lib);
        if (std::holds_alternative<eval::Known>(cls)) ++counts.known;
        else if (std::holds_alternative<eval::NewConjecture>(cls)) ++counts.fresh;
        else ++counts.unparsable;
      }
    }
    return counts;
  };
  const ClassCounts cold = run(0.2), hot = run(1.5);
  const bool ok = cold.frac(cold.known) > hot.frac(hot.known) &&
                  cold.frac(cold.unparsable) < hot.frac(hot.unparsable);
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%zu samples each; T=0.2 known %.2f unparsable %.2f (%zu lines); T=1.5 known %.2f "
                "unparsable %.2f (%zu lines); final train loss %.3f",
                kSamples, cold.frac(cold.known), cold.frac(cold.unparsable), cold.total(),
                hot.frac(hot.known), hot.frac(hot.unparsable), hot.total(), trace.back().loss);
  return check(ok, buf);
}

Verdict external_prover() {
  const char* path = std::getenv("NEUCONJ_PROVER");
  if (!path || !*path) return {Outcome::Skip, "set NEUCONJ_PROVER to an E prover binary"};
  const char* args = std::getenv("NEUCONJ_PROVER_ARGS");
  const eval::ExternalProver prover(path, args && *args ? args : eval::ExternalProver::kDefaultArgs);
  const auto taut = prover.prove(tptp::parse_problem("fof(c, conjecture, ![X]: (p(X) | ~ p(X)))."), 6);
  const auto t0 = std::chrono::steady_clock::now();
  const auto sat = prover.prove(tptp::parse_problem("fof(c, conjecture, ![X]: p(X))."), 6);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = std::holds_alternative<eval::Proved>(taut) &&
                  std::holds_alternative<eval::CounterSatisfiable>(sat) && secs <= 6.0;
  return check(ok, std::string("tautology ") + std::string(eval::verdict_name(taut)) + ", non-theorem " +
                       std::string(eval::verdict_name(sat)) + fmt(" in %.2f s", secs));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"prefix_encoding_exactness", prefix_exactness},
      {"round_trip_suites", round_trip_suites},
      {"lm_gradient_check", lm_gradient_check},
      {"lm_learning_check", lm_learning_check},
      {"decoding_identities", decoding_identities},
      {"harness_oracle_equivalence", harness_oracle_equivalence},
      {"self_premise_removal", self_premise_removal},
      {"temperature_regime", temperature_regime},
      {"external_prover_integration", external_prover},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    std::printf("%s %s: %s [%.1f s]\n", tag, name, v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.outcome == Outcome::Fail;
  }
  return failures == 0 ? 0 : 1;
}
