#pragma once

// Synthetic libraries and prediction sets for the harness tests, plus a
// brute-force re-implementation of the evaluation loop used as an oracle.

#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "neuconj/eval/evaluate.hpp"
#include "neuconj/library.hpp"
#include "neuconj/prefix/codec.hpp"

namespace neuconj::testing {

// n named closed formulas. Entry kinds cycle through: fresh random formula,
// disjunction with an earlier entry, conjunction of two earlier entries,
// a quantified contradiction, and an alpha-renamed copy of an earlier entry.
// Every combined part is a fresh or contradiction entry.
inline tptp::Problem synthetic_library_problem(std::size_t n, std::uint64_t seed) {
  FormulaGen gen(seed);
  tptp::Problem p;
  std::vector<Formula> canon;
  auto fresh = [&](const Formula& f) {
    const Formula c = canonical(f);
    for (const auto& x : canon) {
      if (x == c) return false;
    }
    return true;
  };
  // Parts of disjunctions and conjunctions are drawn from the fresh and
  // contradiction entries only, so formula size stays bounded.
  std::vector<std::size_t> parts;
  while (p.formulas.size() < n) {
    const std::size_t i = p.formulas.size();
    const std::size_t kind = i < 2 ? 0 : i % 5;
    Formula f;
    const auto earlier = [&]() -> const Formula& { return p.formulas[gen.pick(i)].formula; };
    const auto part = [&]() -> const Formula& { return p.formulas[parts[gen.pick(parts.size())]].formula; };
    switch (kind) {
      case 0: f = gen.closed(2); break;
      case 1: f = disj(part(), gen.closed(1)); break;
      case 2: f = conj(part(), part()); break;
      case 3: {
        const Term t = gen.term(2, {"X"});
        const Formula a = gen.coin() ? atom("p", {t}) : atom("v2_struct_0", {t});
        f = forall("X", conj(a, neg(a)));
        break;
      }
      default: f = random_rename(earlier(), gen.rng()); break;
    }
    if (kind != 4 && !fresh(f)) continue;
    canon.push_back(canonical(f));
    if (kind == 0 || kind == 3) parts.push_back(i);
    p.formulas.push_back({"t" + std::to_string(i) + "_syn", tptp::Role::Axiom, f, tptp::Language::Fof});
  }
  return p;
}

// Random predictions for random library conjectures: known premises (often
// the conjecture's own parts), the conjecture itself, new formulas, broken
// lines, repeated predictions and the odd unknown conjecture name.
inline std::vector<eval::Prediction> random_predictions(const FormulaLibrary& lib,
                                                        const prefix::SignatureMap& sig,
                                                        std::size_t count, std::uint64_t seed) {
  FormulaGen gen(seed);
  prefix::SignatureMap scratch = sig;
  auto encode = [&](const Formula& f) {
    return prefix::join_line(prefix::encode_formula(f, scratch));
  };
  std::vector<eval::Prediction> out;
  std::map<std::string, std::size_t> next_sample;
  while (out.size() < count) {
    if (!out.empty() && gen.coin(0.15)) {
      eval::Prediction copy = out[gen.pick(out.size())];
      copy.sample_index = next_sample[copy.conjecture_name]++;
      out.push_back(std::move(copy));
      continue;
    }
    const auto& target = lib.entries()[gen.pick(lib.size())];
    eval::Prediction p;
    p.conjecture_name = gen.coin(0.03) ? "no_such_theorem" : target.name;
    p.sample_index = next_sample[p.conjecture_name]++;
    const std::size_t lines = gen.pick(6);
    for (std::size_t k = 0; k < lines; ++k) {
      const std::size_t r = gen.pick(20);
      if (r < 6) {
        p.lines.push_back(encode(lib.entries()[gen.pick(lib.size())].formula));
      } else if (r < 9) {
        // Parts of a conjunction/disjunction conjecture make it provable.
        const auto* b = std::get_if<tptp::Binary>(&target.formula.node);
        p.lines.push_back(encode(b ? (gen.coin() ? *b->left : *b->right) : target.formula));
      } else if (r < 11) {
        p.lines.push_back(encode(random_rename(target.formula, gen.rng())));
      } else if (r < 15) {
        p.lines.push_back(encode(gen.closed(2)));
      } else if (r < 18) {
        auto toks = prefix::encode_formula(gen.closed(2), scratch);
        toks.resize(toks.size() / 2);
        p.lines.push_back(toks.empty() ? "c&" : prefix::join_line(toks));
      } else {
        p.lines.push_back("c! b0 cno_such_symbol b0");
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

// Independent re-run: string-set dedup, linear-scan alpha classification
// with the canonical-renaming oracle, hand-rolled problem assembly, one stub
// prover call per problem.
inline eval::EvalReport brute_force_report(const std::vector<eval::Prediction>& predictions,
                                           const FormulaLibrary& lib,
                                           const prefix::SignatureMap& sig) {
  using namespace eval;
  EvalReport r;
  r.predictions = predictions.size();
  std::set<std::string> seen;
  std::vector<const Prediction*> unique;
  for (const auto& p : predictions) {
    std::string key = p.conjecture_name + "\x1f";
    for (const auto& l : p.lines) key += l + "\x1e";
    if (seen.insert(key).second) unique.push_back(&p);
  }
  r.unique_after_dedup = unique.size();

  StubProver stub;
  std::set<std::string> proved_theorems;
  std::vector<Formula> new_canon;
  for (const auto* p : unique) {
    struct Premise {
      std::string name;  // empty for new formulas
      Formula f;
    };
    std::vector<Premise> premises;
    for (const auto& line : p->lines) {
      Formula f;
      try {
        f = prefix::decode_tokens(prefix::split_line(line), sig);
      } catch (const prefix::DecodeError&) {
        ++r.unparsable_lines;
        continue;
      }
      const LibraryEntry* hit = nullptr;
      for (const auto& e : lib.entries()) {
        if (oracle_alpha_equal(e.formula, f)) {
          hit = &e;
          break;
        }
      }
      if (hit) {
        ++r.known_lines;
        premises.push_back({hit->name, hit->formula});
      } else {
        ++r.new_conjecture_lines;
        ++r.new_formula_count;
        const Formula c = canonical(f);
        if (std::find(new_canon.begin(), new_canon.end(), c) == new_canon.end()) new_canon.push_back(c);
        premises.push_back({"", f});
      }
    }
    const LibraryEntry* goal = nullptr;
    for (const auto& e : lib.entries()) {
      if (e.name == p->conjecture_name) goal = &e;
    }
    if (!goal) {
      ++r.errors;
      continue;
    }
    tptp::Problem problem;
    std::vector<Formula> included{goal->formula};
    bool self = false, has_new = false;
    std::size_t new_index = 0;
    for (const auto& pr : premises) {
      if (oracle_alpha_equal(pr.f, goal->formula)) {
        self = true;
        continue;
      }
      bool dup = false;
      for (const auto& g : included) dup = dup || oracle_alpha_equal(g, pr.f);
      if (dup) continue;
      included.push_back(pr.f);
      std::string name = pr.name;
      if (name.empty()) {
        has_new = true;
        name = "new_" + std::to_string(++new_index);
      }
      problem.formulas.push_back({name, tptp::Role::Axiom, pr.f, tptp::Language::Fof});
    }
    problem.formulas.push_back({goal->name, tptp::Role::Conjecture, goal->formula, tptp::Language::Fof});
    const AtpVerdict v = stub.prove(problem, 6);
    ++r.problems_attempted;
    auto& stream = has_new ? r.with_new_conjecture : r.no_new_conjecture;
    ++(has_new ? r.problems_with_new_conjecture : r.problems_no_new_conjecture);
    for (VerdictCounts* c : {&stream, &r.verdicts}) {
      if (std::holds_alternative<Proved>(v)) ++c->proved;
      else if (std::holds_alternative<CounterSatisfiable>(v)) ++c->countersatisfiable;
      else ++c->unknown;
    }
    if (const auto* pv = std::get_if<Proved>(&v)) {
      proved_theorems.insert(goal->name);
      if (pv->used_premises.size() == 1) ++r.single_premise_proofs;
      if (self) ++r.self_premise_proofs;
    }
  }
  r.proved_theorems = proved_theorems.size();
  r.new_formula_unique = new_canon.size();
  return r;
}

}  // namespace neuconj::testing
