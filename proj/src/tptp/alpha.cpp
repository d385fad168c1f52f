#include "neuconj/tptp/alpha.hpp"

#include <optional>

namespace neuconj::tptp {

namespace {

// Innermost binder wins, so shadowed names resolve to the nearest level.
std::optional<std::size_t> level_of(const std::vector<std::string>& binders,
                                    const std::string& name) {
  for (std::size_t i = binders.size(); i-- > 0;) {
    if (binders[i] == name) return i;
  }
  return std::nullopt;
}

struct Comparer {
  std::vector<std::string> left_binders;
  std::vector<std::string> right_binders;

  bool terms(const Term& a, const Term& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* va = std::get_if<Variable>(&a.node)) {
      const auto& vb = std::get<Variable>(b.node);
      return level_of(left_binders, va->name) == level_of(right_binders, vb.name);
    }
    const auto& fa = std::get<Application>(a.node);
    const auto& fb = std::get<Application>(b.node);
    return fa.symbol == fb.symbol && term_lists(fa.args, fb.args);
  }

  bool term_lists(const std::vector<Term>& a, const std::vector<Term>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!terms(a[i], b[i])) return false;
    }
    return true;
  }

  bool formulas(const Formula& a, const Formula& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
          using N = std::decay_t<decltype(na)>;
          const auto& nb = std::get<N>(b.node);
          if constexpr (std::is_same_v<N, Quantified>) {
            if (na.kind != nb.kind) return false;
            left_binders.push_back(na.variable);
            right_binders.push_back(nb.variable);
            const bool same = formulas(*na.body, *nb.body);
            left_binders.pop_back();
            right_binders.pop_back();
            return same;
          } else if constexpr (std::is_same_v<N, Binary>) {
            return na.connective == nb.connective && formulas(*na.left, *nb.left) &&
                   formulas(*na.right, *nb.right);
          } else if constexpr (std::is_same_v<N, Negation>) {
            return formulas(*na.body, *nb.body);
          } else if constexpr (std::is_same_v<N, Equality>) {
            return na.negated == nb.negated && terms(na.left, nb.left) &&
                   terms(na.right, nb.right);
          } else {
            return na.predicate == nb.predicate && term_lists(na.args, nb.args);
          }
        },
        a.node);
  }
};

void require_closed(const Formula& f) {
  auto free = free_variables(f);
  if (!free.empty()) throw OpenFormula(free.front());
}

struct KeyWriter {
  std::vector<std::string> binders;
  std::string out;

  void term(const Term& t) {
    if (const auto* v = std::get_if<Variable>(&t.node)) {
      auto level = level_of(binders, v->name);
      if (!level) throw OpenFormula(v->name);
      out += '#';
      out += std::to_string(*level);
      out += ' ';
      return;
    }
    const auto& a = std::get<Application>(t.node);
    symbol(a.symbol, a.args);
  }

  void symbol(const std::string& name, const std::vector<Term>& args) {
    out += name;
    out += '/';
    out += std::to_string(args.size());
    out += ' ';
    for (const auto& a : args) term(a);
  }

  void formula(const Formula& f) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Quantified>) {
            out += n.kind == Quantifier::Forall ? "! " : "? ";
            binders.push_back(n.variable);
            formula(*n.body);
            binders.pop_back();
          } else if constexpr (std::is_same_v<N, Binary>) {
            out += to_string(n.connective);
            out += ' ';
            formula(*n.left);
            formula(*n.right);
          } else if constexpr (std::is_same_v<N, Negation>) {
            out += "~ ";
            formula(*n.body);
          } else if constexpr (std::is_same_v<N, Equality>) {
            out += n.negated ? "!= " : "= ";
            term(n.left);
            term(n.right);
          } else {
            symbol(n.predicate, n.args);
          }
        },
        f.node);
  }
};

}  // namespace

OpenFormula::OpenFormula(std::string variable)
    : Error("formula has free variable " + variable), variable_(std::move(variable)) {}

bool alpha_equal(const Formula& a, const Formula& b) {
  require_closed(a);
  require_closed(b);
  return Comparer{}.formulas(a, b);
}

std::string alpha_key(const Formula& f) {
  KeyWriter w;
  w.formula(f);
  return std::move(w.out);
}

}  // namespace neuconj::tptp
