#pragma once

// Abstract syntax of the first-order (FOF) TPTP fragment.
//
// All nodes are immutable values. Recursive children are held through Box,
// which shares the underlying node and compares by value, so copying a
// Formula is cheap and operator== is structural.

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace neuconj::tptp {

template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) {
    return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

struct Term;

struct Variable {
  std::string name;
  bool operator==(const Variable&) const = default;
};

struct Application {
  std::string symbol;
  std::vector<Term> args;
  bool operator==(const Application&) const = default;
};

struct Term {
  std::variant<Variable, Application> node;
  bool operator==(const Term&) const = default;
};

enum class Quantifier { Forall, Exists };
enum class Connective { And, Or, Implies, Iff };

struct Formula;

struct Quantified {
  Quantifier kind;
  std::string variable;
  Box<Formula> body;
  bool operator==(const Quantified&) const = default;
};

struct Binary {
  Connective connective;
  Box<Formula> left;
  Box<Formula> right;
  bool operator==(const Binary&) const = default;
};

struct Negation {
  Box<Formula> body;
  bool operator==(const Negation&) const = default;
};

struct Equality {
  Term left;
  Term right;
  bool negated = false;
  bool operator==(const Equality&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  bool operator==(const Atom&) const = default;
};

struct Formula {
  std::variant<Atom, Equality, Negation, Binary, Quantified> node;
  bool operator==(const Formula&) const = default;
};

enum class Role { Axiom, Conjecture, Plain, NegatedConjecture };

// cnf statements share the Formula type; the language tag only controls how
// the statement is printed back.
enum class Language { Fof, Cnf };

struct AnnotatedFormula {
  std::string name;
  Role role = Role::Axiom;
  Formula formula;
  Language language = Language::Fof;
  bool operator==(const AnnotatedFormula&) const = default;
};

struct Problem {
  std::vector<AnnotatedFormula> formulas;
  bool operator==(const Problem&) const = default;

  const AnnotatedFormula* find(std::string_view name) const;
  const AnnotatedFormula* conjecture() const;
};

// Construction helpers.
Term var(std::string name);
Term app(std::string symbol, std::vector<Term> args = {});
Formula forall(std::string variable, Formula body);
Formula exists(std::string variable, Formula body);
Formula binary(Connective c, Formula left, Formula right);
Formula conj(Formula left, Formula right);
Formula disj(Formula left, Formula right);
Formula implies(Formula left, Formula right);
Formula iff(Formula left, Formula right);
Formula neg(Formula body);
Formula eq(Term left, Term right);
Formula neq(Term left, Term right);
Formula atom(std::string predicate, std::vector<Term> args = {});

std::string_view to_string(Role role);
std::string_view to_string(Connective c);

bool is_variable_name(std::string_view s);
bool is_symbol_name(std::string_view s);

// Variables that occur free. Order of first occurrence, no duplicates.
std::vector<std::string> free_variables(const Formula& f);
bool is_closed(const Formula& f);

// Universal closure over the free variables in order of first occurrence.
Formula universal_closure(const Formula& f);

}  // namespace neuconj::tptp
