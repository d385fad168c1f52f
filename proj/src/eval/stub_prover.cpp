#include <map>

#include "neuconj/eval/prover.hpp"
#include "neuconj/tptp/alpha.hpp"
#include "neuconj/tptp/printer.hpp"

namespace neuconj::eval {

namespace {

using Clause = std::vector<int>;

// Tseitin encoding of the propositional skeleton: atoms, equalities and
// quantified subformulas are letters.
class Abstraction {
 public:
  int encode(const tptp::Formula& f) {
    using namespace tptp;
    return std::visit(
        [&](const auto& n) -> int {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Negation>) {
            return -encode(*n.body);
          } else if constexpr (std::is_same_v<N, Equality>) {
            if (!n.negated) return letter(f);
            return -letter(Formula{Equality{n.left, n.right, false}});
          } else if constexpr (std::is_same_v<N, Binary>) {
            const int a = encode(*n.left);
            const int b = encode(*n.right);
            const int x = fresh();
            switch (n.connective) {
              case Connective::And:
                add({-x, a}), add({-x, b}), add({x, -a, -b});
                break;
              case Connective::Or:
                add({-x, a, b}), add({x, -a}), add({x, -b});
                break;
              case Connective::Implies:
                add({-x, -a, b}), add({x, a}), add({x, -b});
                break;
              case Connective::Iff:
                add({-x, -a, b}), add({-x, a, -b}), add({x, a, b}), add({x, -a, -b});
                break;
            }
            return x;
          } else {
            return letter(f);
          }
        },
        f.node);
  }

  void add(Clause c) { clauses_.push_back(std::move(c)); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  int vars() const { return next_ - 1; }

 private:
  int fresh() { return next_++; }

  int letter(const tptp::Formula& f) {
    // Closed subformulas are identified up to renaming; open ones (inside a
    // stripped quantifier prefix) only by their printed text.
    const std::string key =
        tptp::is_closed(f) ? "c:" + tptp::alpha_key(f) : "o:" + tptp::print_formula(f);
    auto [it, inserted] = letters_.emplace(key, next_);
    if (inserted) ++next_;
    return it->second;
  }

  std::map<std::string, int> letters_;
  std::vector<Clause> clauses_;
  int next_ = 1;
};

// DPLL with unit propagation. assign[v] is 0 (free), 1 or -1.
bool dpll(const std::vector<Clause>& clauses, std::vector<int> assign) {
  auto value = [&](int lit) {
    const int a = assign[static_cast<std::size_t>(std::abs(lit))];
    return lit > 0 ? a : -a;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : clauses) {
      int free_lit = 0, free_count = 0;
      bool sat = false;
      for (int lit : c) {
        const int v = value(lit);
        if (v > 0) {
          sat = true;
          break;
        }
        if (v == 0) {
          free_lit = lit;
          ++free_count;
        }
      }
      if (sat) continue;
      if (free_count == 0) return false;
      if (free_count == 1) {
        assign[static_cast<std::size_t>(std::abs(free_lit))] = free_lit > 0 ? 1 : -1;
        changed = true;
      }
    }
  }
  for (const auto& c : clauses) {
    bool sat = false;
    int branch = 0;
    for (int lit : c) {
      const int v = value(lit);
      if (v > 0) {
        sat = true;
        break;
      }
      if (v == 0 && branch == 0) branch = lit;
    }
    if (sat) continue;
    for (int polarity : {1, -1}) {
      std::vector<int> next = assign;
      next[static_cast<std::size_t>(std::abs(branch))] = branch > 0 ? polarity : -polarity;
      if (dpll(clauses, std::move(next))) return true;
    }
    return false;
  }
  return true;
}

bool satisfiable(const std::vector<const tptp::Formula*>& asserted, const tptp::Formula* refuted) {
  Abstraction abs;
  for (const auto* f : asserted) {
    const int lit = abs.encode(*f);
    abs.add({lit});
  }
  if (refuted) {
    const int lit = abs.encode(*refuted);
    abs.add({-lit});
  }
  return dpll(abs.clauses(), std::vector<int>(static_cast<std::size_t>(abs.vars()) + 1, 0));
}

const tptp::Formula& strip_quantifiers(const tptp::Formula& f) {
  const tptp::Formula* cur = &f;
  while (const auto* q = std::get_if<tptp::Quantified>(&cur->node)) cur = &*q->body;
  return *cur;
}

}  // namespace

AtpVerdict StubProver::prove(const tptp::Problem& problem, double) const {
  std::vector<const tptp::AnnotatedFormula*> axioms;
  const tptp::AnnotatedFormula* conj = nullptr;
  for (const auto& af : problem.formulas) {
    if (af.role == tptp::Role::Conjecture) {
      if (!conj) conj = &af;
    } else {
      axioms.push_back(&af);
    }
  }
  const tptp::Formula goal = conj ? tptp::universal_closure(conj->formula) : tptp::Formula{};

  std::vector<tptp::Formula> closed;
  closed.reserve(axioms.size());
  for (const auto* a : axioms) closed.push_back(tptp::universal_closure(a->formula));

  if (conj) {
    for (std::size_t i = 0; i < axioms.size(); ++i) {
      if (tptp::alpha_equal(closed[i], goal)) return Proved{{axioms[i]->name}};
    }
  }

  std::vector<const tptp::Formula*> all;
  for (const auto& f : closed) all.push_back(&f);
  const tptp::Formula* refuted = conj ? &goal : nullptr;
  if (!satisfiable(all, refuted)) {
    std::vector<bool> keep(axioms.size(), true);
    for (std::size_t i = 0; i < axioms.size(); ++i) {
      keep[i] = false;
      std::vector<const tptp::Formula*> subset;
      for (std::size_t j = 0; j < axioms.size(); ++j) {
        if (keep[j]) subset.push_back(&closed[j]);
      }
      if (satisfiable(subset, refuted)) keep[i] = true;
    }
    Proved p;
    for (std::size_t i = 0; i < axioms.size(); ++i) {
      if (keep[i]) p.used_premises.push_back(axioms[i]->name);
    }
    return p;
  }

  if (conj) {
    const tptp::Formula& matrix = strip_quantifiers(conj->formula);
    if (!satisfiable({&matrix}, nullptr) && satisfiable(all, nullptr)) return CounterSatisfiable{};
  }
  return Unknown{UnknownReason::GaveUp, "outside the stub prover's fragment"};
}

}  // namespace neuconj::eval
