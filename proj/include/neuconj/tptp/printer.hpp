#pragma once

#include <string>

#include "neuconj/tptp/ast.hpp"

namespace neuconj::tptp {

std::string print_term(const Term& t);

// Binary subformulas are always parenthesized, so the output reparses to the
// identical tree regardless of associativity.
std::string print_formula(const Formula& f);

std::string print_statement(const AnnotatedFormula& af);

// One statement per line, each terminated by '\n'. Empty problem prints "".
std::string print_problem(const Problem& problem);

}  // namespace neuconj::tptp
