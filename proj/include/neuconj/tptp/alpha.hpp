#pragma once

#include <string>

#include "neuconj/error.hpp"
#include "neuconj/tptp/ast.hpp"

namespace neuconj::tptp {

class OpenFormula : public Error {
 public:
  explicit OpenFormula(std::string variable);
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

// Equality up to renaming of bound variables. Both formulas must be closed.
bool alpha_equal(const Formula& a, const Formula& b);

// A name-free serialization of a closed formula: bound variables are
// replaced by their binder's de Bruijn level. Two closed formulas have the
// same key iff they are alpha-equal; used for hashing.
std::string alpha_key(const Formula& f);

}  // namespace neuconj::tptp
