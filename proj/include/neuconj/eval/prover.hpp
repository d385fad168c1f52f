#pragma once

#include <string>
#include <variant>
#include <vector>

#include "neuconj/error.hpp"
#include "neuconj/tptp/ast.hpp"

namespace neuconj::eval {

struct Proved {
  std::vector<std::string> used_premises;
  bool operator==(const Proved&) const = default;
};
struct CounterSatisfiable {
  bool operator==(const CounterSatisfiable&) const = default;
};
enum class UnknownReason { Timeout, GaveUp, Error };
struct Unknown {
  UnknownReason reason = UnknownReason::GaveUp;
  std::string detail;
  bool operator==(const Unknown&) const = default;
};
using AtpVerdict = std::variant<Proved, CounterSatisfiable, Unknown>;

std::string_view to_string(UnknownReason r);
// "proved", "countersatisfiable" or "unknown".
std::string_view verdict_name(const AtpVerdict& v);

class ProverNotFound : public Error {
 public:
  explicit ProverNotFound(const std::string& path)
      : Error("prover executable not found: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ProverCrashed : public Error {
 public:
  ProverCrashed(int exit_code, std::string excerpt)
      : Error("prover crashed (exit " + std::to_string(exit_code) + "): " + excerpt),
        exit_code_(exit_code),
        excerpt_(std::move(excerpt)) {}
  int exit_code() const { return exit_code_; }
  const std::string& excerpt() const { return excerpt_; }

 private:
  int exit_code_;
  std::string excerpt_;
};

// Implementations must be safe to call concurrently.
class Prover {
 public:
  virtual ~Prover() = default;
  virtual AtpVerdict prove(const tptp::Problem& problem, double limit_seconds) const = 0;
  // Whether the countersatisfiability pre-pass with a shorter limit is
  // worth running before the proof attempt.
  virtual bool uses_time_limit() const { return true; }
};

// Hermetic stand-in for a first-order prover, complete only for two cases:
//   * an axiom alpha-equal to the conjecture proves it;
//   * propositional reasoning, where maximal quantified subformulas and
//     atoms are opaque letters (alpha-equivalent ones share a letter):
//     unsatisfiable axioms + negated conjecture give Proved with a greedily
//     minimized premise set; a conjecture whose quantifier-free matrix is a
//     propositional contradiction, under satisfiable axioms, is
//     CounterSatisfiable.
// Everything else is Unknown(GaveUp). Time limits are ignored.
class StubProver final : public Prover {
 public:
  AtpVerdict prove(const tptp::Problem& problem, double limit_seconds) const override;
  bool uses_time_limit() const override { return false; }
};

// Runs an external prover in its own temporary directory. Arguments come
// from a template where {file} is the problem path and {limit} the time
// limit rounded up to whole seconds. The process is killed after the limit
// plus a grace period (Unknown(Timeout)).
class ExternalProver final : public Prover {
 public:
  static constexpr const char* kDefaultArgs = "--auto --proof-object --cpu-limit={limit} {file}";

  // Throws ProverNotFound when path is not an executable file.
  explicit ExternalProver(std::string path, std::string arg_template = kDefaultArgs,
                          double grace_seconds = 2.0);
  // Throws ProverNotFound / ProverCrashed.
  AtpVerdict prove(const tptp::Problem& problem, double limit_seconds) const override;

 private:
  std::string path_;
  std::string arg_template_;
  double grace_seconds_;
};

// Maps a prover transcript to a verdict: SZS Theorem / Unsatisfiable /
// ContradictoryAxioms -> Proved with the axiom names cited in file(_, name)
// sources (restricted to axiom_names); CounterSatisfiable / Satisfiable ->
// CounterSatisfiable; Timeout / ResourceOut -> Unknown(Timeout); other or no
// status -> Unknown(GaveUp).
AtpVerdict parse_szs_output(const std::string& output, const std::vector<std::string>& axiom_names);

}  // namespace neuconj::eval
