#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "neuconj/eval/premises.hpp"
#include "neuconj/eval/prover.hpp"

namespace neuconj::eval {

struct EvalOptions {
  AssembleOptions assemble;
  double cs_limit = 1;     // seconds for the countersatisfiability pre-pass
  double proof_limit = 6;  // seconds for the proof attempt
  std::size_t jobs = 0;    // worker threads; 0 = hardware concurrency
};

struct VerdictCounts {
  std::size_t proved = 0;
  std::size_t countersatisfiable = 0;
  std::size_t unknown = 0;
  std::size_t total() const { return proved + countersatisfiable + unknown; }
  bool operator==(const VerdictCounts&) const = default;
};

struct EvalReport {
  std::size_t predictions = 0;
  std::size_t unique_after_dedup = 0;
  std::size_t problems_attempted = 0;
  std::size_t problems_no_new_conjecture = 0;
  std::size_t problems_with_new_conjecture = 0;
  VerdictCounts verdicts;               // all attempted problems
  VerdictCounts no_new_conjecture;      // problems whose axioms are all known
  VerdictCounts with_new_conjecture;    // problems with at least one new formula
  std::size_t proved_theorems = 0;      // distinct conjectures proved
  std::size_t single_premise_proofs = 0;
  std::size_t self_premise_proofs = 0;  // proved, and the prediction proposed the conjecture
  std::size_t known_lines = 0;
  std::size_t new_conjecture_lines = 0;
  std::size_t unparsable_lines = 0;
  std::size_t new_formula_count = 0;    // multiset size over unique predictions
  std::size_t new_formula_unique = 0;   // distinct up to alpha-equivalence
  std::size_t errors = 0;               // predictions that could not be assembled or proved

  bool operator==(const EvalReport&) const = default;
};

struct ProblemRecord {
  std::string conjecture;
  std::size_t sample = 0;
  std::size_t known = 0;
  std::size_t new_conjectures = 0;
  std::size_t unparsable = 0;
  bool attempted = false;
  bool has_new_conjecture = false;
  bool proposed_self = false;
  std::vector<std::string> axioms;
  AtpVerdict verdict = Unknown{UnknownReason::Error, "not attempted"};
  std::string error;
};

struct EvalResult {
  EvalReport report;
  std::vector<ProblemRecord> records;       // one per unique prediction, in order
  std::vector<tptp::Formula> new_formulas;  // alpha-distinct, first-occurrence order
};

// Two-stage attempt: run with cs_limit; a CounterSatisfiable or Proved
// verdict is final, otherwise retry with proof_limit. Provers that ignore
// limits are run once.
AtpVerdict run_two_stage(const Prover& prover, const tptp::Problem& problem,
                         const EvalOptions& opts);

// dedup -> classify -> assemble -> prove for every prediction. Per-problem
// failures are recorded, not thrown.
EvalResult evaluate(const std::vector<Prediction>& predictions, const FormulaLibrary& library,
                    const prefix::SignatureMap& sig, const Prover& prover,
                    const EvalOptions& opts = {});

// Ranks library entry names for a target formula.
using PremiseSelector =
    std::function<std::vector<std::string>(const tptp::Formula&, const FormulaLibrary&)>;

// Top n entries by Jaccard similarity of function/predicate symbol sets;
// ties keep library order. Entries with no shared symbol are not returned.
PremiseSelector jaccard_selector(std::size_t n = 32);

std::vector<std::pair<tptp::Formula, AtpVerdict>> prove_new_conjectures(
    const std::vector<tptp::Formula>& formulas, const FormulaLibrary& library,
    const PremiseSelector& selector, const Prover& prover, double limit_seconds,
    std::size_t jobs = 0);

std::string report_json(const EvalReport& r);
EvalReport report_from_json(const std::string& text);
// Header: conjecture,sample,known,new,unparsable,verdict,premises_used
std::string records_csv(const std::vector<ProblemRecord>& records);

// Runs fn(i) for i in [0, n) on a bounded pool of threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace neuconj::eval
