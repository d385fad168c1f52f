#include "neuconj/tptp/ast.hpp"

#include <algorithm>
#include <cctype>

namespace neuconj::tptp {

const AnnotatedFormula* Problem::find(std::string_view name) const {
  for (const auto& af : formulas) {
    if (af.name == name) return &af;
  }
  return nullptr;
}

const AnnotatedFormula* Problem::conjecture() const {
  for (const auto& af : formulas) {
    if (af.role == Role::Conjecture) return &af;
  }
  return nullptr;
}

Term var(std::string name) { return Term{Variable{std::move(name)}}; }

Term app(std::string symbol, std::vector<Term> args) {
  return Term{Application{std::move(symbol), std::move(args)}};
}

Formula forall(std::string variable, Formula body) {
  return Formula{Quantified{Quantifier::Forall, std::move(variable), std::move(body)}};
}

Formula exists(std::string variable, Formula body) {
  return Formula{Quantified{Quantifier::Exists, std::move(variable), std::move(body)}};
}

Formula binary(Connective c, Formula left, Formula right) {
  return Formula{Binary{c, std::move(left), std::move(right)}};
}

Formula conj(Formula left, Formula right) {
  return binary(Connective::And, std::move(left), std::move(right));
}
Formula disj(Formula left, Formula right) {
  return binary(Connective::Or, std::move(left), std::move(right));
}
Formula implies(Formula left, Formula right) {
  return binary(Connective::Implies, std::move(left), std::move(right));
}
Formula iff(Formula left, Formula right) {
  return binary(Connective::Iff, std::move(left), std::move(right));
}

Formula neg(Formula body) { return Formula{Negation{std::move(body)}}; }

Formula eq(Term left, Term right) {
  return Formula{Equality{std::move(left), std::move(right), false}};
}

Formula neq(Term left, Term right) {
  return Formula{Equality{std::move(left), std::move(right), true}};
}

Formula atom(std::string predicate, std::vector<Term> args) {
  return Formula{Atom{std::move(predicate), std::move(args)}};
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Axiom: return "axiom";
    case Role::Conjecture: return "conjecture";
    case Role::Plain: return "plain";
    case Role::NegatedConjecture: return "negated_conjecture";
  }
  return "axiom";
}

std::string_view to_string(Connective c) {
  switch (c) {
    case Connective::And: return "&";
    case Connective::Or: return "|";
    case Connective::Implies: return "=>";
    case Connective::Iff: return "<=>";
  }
  return "&";
}

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

template <class Visit>
void visit_term_vars(const Term& t, Visit&& visit) {
  if (const auto* v = std::get_if<Variable>(&t.node)) {
    visit(v->name);
    return;
  }
  for (const auto& a : std::get<Application>(t.node).args) visit_term_vars(a, visit);
}

void collect_free(const Formula& f, std::vector<std::string>& bound,
                  std::vector<std::string>& out) {
  auto on_var = [&](const std::string& name) {
    if (std::find(bound.begin(), bound.end(), name) != bound.end()) return;
    if (std::find(out.begin(), out.end(), name) != out.end()) return;
    out.push_back(name);
  };
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Quantified>) {
          bound.push_back(n.variable);
          collect_free(*n.body, bound, out);
          bound.pop_back();
        } else if constexpr (std::is_same_v<N, Binary>) {
          collect_free(*n.left, bound, out);
          collect_free(*n.right, bound, out);
        } else if constexpr (std::is_same_v<N, Negation>) {
          collect_free(*n.body, bound, out);
        } else if constexpr (std::is_same_v<N, Equality>) {
          visit_term_vars(n.left, on_var);
          visit_term_vars(n.right, on_var);
        } else {
          for (const auto& a : n.args) visit_term_vars(a, on_var);
        }
      },
      f.node);
}

}  // namespace

bool is_variable_name(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), is_word_char);
}

bool is_symbol_name(std::string_view s) {
  if (s.empty()) return false;
  const char c = s.front();
  if (!(std::islower(static_cast<unsigned char>(c)) ||
        std::isdigit(static_cast<unsigned char>(c)) || c == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), is_word_char);
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

Formula universal_closure(const Formula& f) {
  auto vars = free_variables(f);
  Formula out = f;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) out = forall(*it, std::move(out));
  return out;
}

}  // namespace neuconj::tptp
