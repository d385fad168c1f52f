#include "neuconj/tptp/printer.hpp"

namespace neuconj::tptp {

namespace {

void print_args(const std::vector<Term>& args, std::string& out);

void print_term_to(const Term& t, std::string& out) {
  if (const auto* v = std::get_if<Variable>(&t.node)) {
    out += v->name;
    return;
  }
  const auto& a = std::get<Application>(t.node);
  out += a.symbol;
  print_args(a.args, out);
}

void print_args(const std::vector<Term>& args, std::string& out) {
  if (args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    print_term_to(args[i], out);
  }
  out += ')';
}

void print_formula_to(const Formula& f, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Quantified>) {
          out += n.kind == Quantifier::Forall ? "![" : "?[";
          out += n.variable;
          out += "] : ";
          print_formula_to(*n.body, out);
        } else if constexpr (std::is_same_v<N, Binary>) {
          out += '(';
          print_formula_to(*n.left, out);
          out += ' ';
          out += to_string(n.connective);
          out += ' ';
          print_formula_to(*n.right, out);
          out += ')';
        } else if constexpr (std::is_same_v<N, Negation>) {
          out += "~ ";
          const bool wrap = std::holds_alternative<Equality>(n.body->node);
          if (wrap) out += '(';
          print_formula_to(*n.body, out);
          if (wrap) out += ')';
        } else if constexpr (std::is_same_v<N, Equality>) {
          print_term_to(n.left, out);
          out += n.negated ? " != " : " = ";
          print_term_to(n.right, out);
        } else {
          out += n.predicate;
          print_args(n.args, out);
        }
      },
      f.node);
}

}  // namespace

std::string print_term(const Term& t) {
  std::string out;
  print_term_to(t, out);
  return out;
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_formula_to(f, out);
  return out;
}

std::string print_statement(const AnnotatedFormula& af) {
  std::string out = af.language == Language::Cnf ? "cnf(" : "fof(";
  out += af.name;
  out += ", ";
  out += to_string(af.role);
  out += ", ";
  print_formula_to(af.formula, out);
  out += ").";
  return out;
}

std::string print_problem(const Problem& problem) {
  std::string out;
  for (const auto& af : problem.formulas) {
    out += print_statement(af);
    out += '\n';
  }
  return out;
}

}  // namespace neuconj::tptp
