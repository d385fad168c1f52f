#include "neuconj/eval/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

#include "neuconj/tptp/alpha.hpp"

namespace neuconj::eval {

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

AtpVerdict run_two_stage(const Prover& prover, const tptp::Problem& problem,
                         const EvalOptions& opts) {
  if (!prover.uses_time_limit()) return prover.prove(problem, opts.proof_limit);
  AtpVerdict first = prover.prove(problem, opts.cs_limit);
  if (!std::holds_alternative<Unknown>(first)) return first;
  return prover.prove(problem, opts.proof_limit);
}

namespace {

struct Work {
  ProblemRecord record;
  std::vector<tptp::Formula> new_formulas;
  bool error = false;
};

void count(VerdictCounts& c, const AtpVerdict& v) {
  if (std::holds_alternative<Proved>(v)) {
    ++c.proved;
  } else if (std::holds_alternative<CounterSatisfiable>(v)) {
    ++c.countersatisfiable;
  } else {
    ++c.unknown;
  }
}

}  // namespace

EvalResult evaluate(const std::vector<Prediction>& predictions, const FormulaLibrary& library,
                    const prefix::SignatureMap& sig, const Prover& prover,
                    const EvalOptions& opts) {
  EvalResult result;
  EvalReport& r = result.report;
  r.predictions = predictions.size();
  const std::vector<Prediction> unique = dedup(predictions);
  r.unique_after_dedup = unique.size();

  std::vector<Work> work(unique.size());
  parallel_for(unique.size(), opts.jobs, [&](std::size_t i) {
    const Prediction& p = unique[i];
    Work& w = work[i];
    w.record.conjecture = p.conjecture_name;
    w.record.sample = p.sample_index;
    std::vector<PremiseClass> classes;
    for (const auto& line : p.lines) {
      classes.push_back(classify_premise(decode_line(line, sig), library));
      if (std::holds_alternative<Known>(classes.back())) ++w.record.known;
      if (const auto* nc = std::get_if<NewConjecture>(&classes.back())) {
        ++w.record.new_conjectures;
        w.new_formulas.push_back(nc->formula);
      }
      if (std::holds_alternative<Unparsable>(classes.back())) ++w.record.unparsable;
    }
    AssembledProblem ap;
    try {
      ap = assemble_problem(p.conjecture_name, classes, library, opts.assemble);
    } catch (const Error& e) {
      w.record.error = e.what();
      w.error = true;
      return;
    }
    w.record.attempted = true;
    w.record.has_new_conjecture = ap.has_new_conjecture;
    w.record.proposed_self = ap.proposed_self;
    w.record.axioms = ap.axiom_names;
    try {
      w.record.verdict = run_two_stage(prover, ap.problem, opts);
    } catch (const Error& e) {
      w.record.verdict = Unknown{UnknownReason::Error, e.what()};
      w.record.error = e.what();
      w.error = true;
    }
  });

  std::unordered_set<std::string> new_keys;
  std::set<std::string> proved_conjectures;
  for (auto& w : work) {
    const ProblemRecord& rec = w.record;
    r.known_lines += rec.known;
    r.new_conjecture_lines += rec.new_conjectures;
    r.unparsable_lines += rec.unparsable;
    r.new_formula_count += w.new_formulas.size();
    for (auto& f : w.new_formulas) {
      if (new_keys.insert(tptp::alpha_key(f)).second) result.new_formulas.push_back(std::move(f));
    }
    if (w.error) ++r.errors;
    if (rec.attempted) {
      ++r.problems_attempted;
      if (rec.has_new_conjecture) {
        ++r.problems_with_new_conjecture;
        count(r.with_new_conjecture, rec.verdict);
      } else {
        ++r.problems_no_new_conjecture;
        count(r.no_new_conjecture, rec.verdict);
      }
      count(r.verdicts, rec.verdict);
      if (const auto* pr = std::get_if<Proved>(&rec.verdict)) {
        proved_conjectures.insert(rec.conjecture);
        if (pr->used_premises.size() == 1) ++r.single_premise_proofs;
        if (rec.proposed_self) ++r.self_premise_proofs;
      }
    }
    result.records.push_back(std::move(w.record));
  }
  r.new_formula_unique = result.new_formulas.size();
  r.proved_theorems = proved_conjectures.size();
  return result;
}

namespace {

void collect_term_symbols(const tptp::Term& t, std::set<std::string>& out) {
  if (const auto* a = std::get_if<tptp::Application>(&t.node)) {
    out.insert(a->symbol);
    for (const auto& arg : a->args) collect_term_symbols(arg, out);
  }
}

void collect_symbols(const tptp::Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, tptp::Atom>) {
          out.insert(n.predicate);
          for (const auto& a : n.args) collect_term_symbols(a, out);
        } else if constexpr (std::is_same_v<N, tptp::Equality>) {
          collect_term_symbols(n.left, out);
          collect_term_symbols(n.right, out);
        } else if constexpr (std::is_same_v<N, tptp::Negation>) {
          collect_symbols(*n.body, out);
        } else if constexpr (std::is_same_v<N, tptp::Binary>) {
          collect_symbols(*n.left, out);
          collect_symbols(*n.right, out);
        } else {
          collect_symbols(*n.body, out);
        }
      },
      f.node);
}

std::set<std::string> symbols_of(const tptp::Formula& f) {
  std::set<std::string> s;
  collect_symbols(f, s);
  return s;
}

}  // namespace

PremiseSelector jaccard_selector(std::size_t n) {
  return [n](const tptp::Formula& target, const FormulaLibrary& library) {
    const auto want = symbols_of(target);
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < library.entries().size(); ++i) {
      const auto have = symbols_of(library.entries()[i].formula);
      std::size_t shared = 0;
      for (const auto& s : have) shared += want.count(s);
      if (shared == 0) continue;
      const double j = static_cast<double>(shared) /
                       static_cast<double>(want.size() + have.size() - shared);
      ranked.emplace_back(j, i);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (ranked.size() > n) ranked.resize(n);
    std::vector<std::string> names;
    for (const auto& [score, i] : ranked) names.push_back(library.entries()[i].name);
    return names;
  };
}

std::vector<std::pair<tptp::Formula, AtpVerdict>> prove_new_conjectures(
    const std::vector<tptp::Formula>& formulas, const FormulaLibrary& library,
    const PremiseSelector& selector, const Prover& prover, double limit_seconds,
    std::size_t jobs) {
  std::vector<std::pair<tptp::Formula, AtpVerdict>> out(
      formulas.size(), {tptp::Formula{}, Unknown{UnknownReason::Error, "not run"}});
  parallel_for(formulas.size(), jobs, [&](std::size_t i) {
    tptp::Problem problem;
    for (const auto& name : selector(formulas[i], library)) {
      problem.formulas.push_back(
          {name, tptp::Role::Axiom, library.at(name).formula, tptp::Language::Fof});
    }
    problem.formulas.push_back(
        {"new_conjecture", tptp::Role::Conjecture, formulas[i], tptp::Language::Fof});
    out[i] = {formulas[i], prover.prove(problem, limit_seconds)};
  });
  return out;
}

namespace {

using nlohmann::json;

json counts_json(const VerdictCounts& c) {
  return {{"proved", c.proved}, {"countersatisfiable", c.countersatisfiable}, {"unknown", c.unknown}};
}

VerdictCounts counts_from(const json& j) {
  return {j.at("proved").get<std::size_t>(), j.at("countersatisfiable").get<std::size_t>(),
          j.at("unknown").get<std::size_t>()};
}

}  // namespace

std::string report_json(const EvalReport& r) {
  json j{{"predictions", r.predictions},
         {"unique_after_dedup", r.unique_after_dedup},
         {"problems_attempted", r.problems_attempted},
         {"problems_no_new_conjecture", r.problems_no_new_conjecture},
         {"problems_with_new_conjecture", r.problems_with_new_conjecture},
         {"verdicts", counts_json(r.verdicts)},
         {"no_new_conjecture", counts_json(r.no_new_conjecture)},
         {"with_new_conjecture", counts_json(r.with_new_conjecture)},
         {"proved_theorems", r.proved_theorems},
         {"single_premise_proofs", r.single_premise_proofs},
         {"self_premise_proofs", r.self_premise_proofs},
         {"known_lines", r.known_lines},
         {"new_conjecture_lines", r.new_conjecture_lines},
         {"unparsable_lines", r.unparsable_lines},
         {"new_formula_count", r.new_formula_count},
         {"new_formula_unique", r.new_formula_unique},
         {"errors", r.errors}};
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    EvalReport r;
    r.predictions = j.at("predictions");
    r.unique_after_dedup = j.at("unique_after_dedup");
    r.problems_attempted = j.at("problems_attempted");
    r.problems_no_new_conjecture = j.at("problems_no_new_conjecture");
    r.problems_with_new_conjecture = j.at("problems_with_new_conjecture");
    r.verdicts = counts_from(j.at("verdicts"));
    r.no_new_conjecture = counts_from(j.at("no_new_conjecture"));
    r.with_new_conjecture = counts_from(j.at("with_new_conjecture"));
    r.proved_theorems = j.at("proved_theorems");
    r.single_premise_proofs = j.at("single_premise_proofs");
    r.self_premise_proofs = j.at("self_premise_proofs");
    r.known_lines = j.at("known_lines");
    r.new_conjecture_lines = j.at("new_conjecture_lines");
    r.unparsable_lines = j.at("unparsable_lines");
    r.new_formula_count = j.at("new_formula_count");
    r.new_formula_unique = j.at("new_formula_unique");
    r.errors = j.at("errors");
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
}

std::string records_csv(const std::vector<ProblemRecord>& records) {
  std::string out = "conjecture,sample,known,new,unparsable,verdict,premises_used\n";
  for (const auto& r : records) {
    std::string used;
    if (const auto* p = std::get_if<Proved>(&r.verdict)) {
      for (const auto& name : p->used_premises) used += (used.empty() ? "" : ";") + name;
    }
    const std::string verdict = r.attempted ? std::string(verdict_name(r.verdict)) : "error";
    out += r.conjecture + "," + std::to_string(r.sample) + "," + std::to_string(r.known) + "," +
           std::to_string(r.new_conjectures) + "," + std::to_string(r.unparsable) + "," + verdict +
           "," + used + "\n";
  }
  return out;
}

}  // namespace neuconj::eval
