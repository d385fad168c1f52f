#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "neuconj/error.hpp"
#include "neuconj/tptp/ast.hpp"

namespace neuconj::tptp {

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected, std::string found);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string found_;
};

// Parses a sequence of `fof(name, role, formula[, source[, info]]).` and
// `cnf(...)` statements. Whitespace, `%` line comments and `/* */` block
// comments are insignificant. Annotations after the formula are skipped.
//
// Precedence: `~` binds tightest, then `&` / `|` (left-associative; mixing
// the two without parentheses is an error), then `=>` / `<=>`
// (non-associative). A quantifier body is a unit formula, as in TPTP.
Problem parse_problem(std::string_view text);

// Parses a single formula with no surrounding statement.
Formula parse_formula(std::string_view text);

}  // namespace neuconj::tptp
