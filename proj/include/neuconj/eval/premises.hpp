#pragma once

// Generated premise predictions: loading, deduplication, classification
// against the library, and assembly into ATP problems.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "neuconj/library.hpp"
#include "neuconj/prefix/codec.hpp"
#include "neuconj/prefix/signature.hpp"
#include "neuconj/tptp/ast.hpp"

namespace neuconj::eval {

// One generated premise list for one conjecture. Lines are prefix token
// streams, one premise per line.
struct Prediction {
  std::string conjecture_name;
  std::size_t sample_index = 0;
  std::vector<std::string> lines;
  bool operator==(const Prediction&) const = default;
};

// File name `<conjecture>___<sample>`; a name without `___` is sample 0.
// Blank lines are ignored.
Prediction parse_prediction(const std::string& file_name, std::string_view text);
// Every regular file of a directory, ordered by (conjecture, sample).
std::vector<Prediction> load_predictions(const std::string& dir);
void write_prediction(const std::string& dir, const Prediction& p);
std::string prediction_file_name(const Prediction& p);

// Drops later predictions whose (conjecture, lines) already occurred.
std::vector<Prediction> dedup(std::vector<Prediction> predictions);

struct DecodeFailure {
  prefix::DecodeErrorKind kind;
  std::string message;
};
using DecodeResult = std::variant<tptp::Formula, DecodeFailure>;

DecodeResult decode_line(std::string_view line, const prefix::SignatureMap& sig);

struct Known {
  std::string name;
  std::size_t chrono_index;
};
struct NewConjecture {
  tptp::Formula formula;
};
struct Unparsable {
  std::string reason;  // the decode error kind, e.g. "UnknownSymbol"
};
using PremiseClass = std::variant<Known, NewConjecture, Unparsable>;

// Known when alpha-equal to a library entry (the earliest on several hits).
PremiseClass classify_premise(const DecodeResult& decoded, const FormulaLibrary& library);

struct AssembleOptions {
  // Also drop Known premises that do not precede the conjecture.
  bool strict_chronology = false;
};

struct AssembledProblem {
  tptp::Problem problem;
  std::vector<std::string> axiom_names;  // in problem order
  bool has_new_conjecture = false;
  bool proposed_self = false;  // a premise was alpha-equal to the conjecture
  std::size_t dropped_unparsable = 0;
  std::size_t dropped_duplicates = 0;
  std::size_t dropped_chronology = 0;
};

// The conjecture plus one axiom per distinct usable premise. Known premises
// keep their library names; new conjectures are named new_<k>. Premises
// alpha-equal to the conjecture are never included. Throws UnknownName when
// the conjecture is not in the library.
AssembledProblem assemble_problem(const std::string& conjecture,
                                  std::span<const PremiseClass> premises,
                                  const FormulaLibrary& library, const AssembleOptions& opts = {});

}  // namespace neuconj::eval
