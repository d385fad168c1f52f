#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "neuconj/error.hpp"
#include "neuconj/library.hpp"
#include "neuconj/prefix/signature.hpp"

namespace neuconj::dataset {

enum class DatasetKind { ConcatenatedText, TokenizedProofs, PrefixPremises };

struct CorpusSpec {
  DatasetKind dataset_kind;
  std::vector<std::string> input_paths;
  std::string output_path;
};

struct ProofManifest {
  std::string conjecture_name;
  std::vector<std::string> ordered_premises;  // order of first use in the proof
  bool operator==(const ProofManifest&) const = default;
};

class NoConjecture : public Error {
 public:
  NoConjecture() : Error("derivation has no conjecture or negated_conjecture statement") {}
};

// Article text with `::` comments removed, trailing whitespace trimmed and
// blank-line runs collapsed; files joined in order by one blank line.
std::string build_concatenated(const std::vector<std::string>& files);

// One space-joined token line per TPTP statement; derivations separated by a
// blank line.
std::string build_tokenized_proofs(const std::vector<std::string>& derivations);

// Axiom names in order of first appearance, plus the conjecture name.
ProofManifest extract_premise_order(std::string_view derivation);

// Line 1 is the encoded conjecture, then each premise in manifest order.
// Each line ends with '\n'. Throws UnknownName.
std::string build_prefix_premise_file(const ProofManifest& manifest,
                                      const FormulaLibrary& library,
                                      prefix::SignatureMap& sig);

// Statements of a TPTP/TSTP text as token lists, split at the `.` that closes
// each statement. Trailing tokens without a terminator form a last statement.
std::vector<std::vector<std::string>> split_statements(std::string_view text);

// Runs the builder selected by spec.dataset_kind for the two single-file
// corpora (ConcatenatedText and TokenizedProofs) and writes the output.
void build_corpus(const CorpusSpec& spec);

struct Dataset4Summary {
  std::size_t files_written = 0;
  std::vector<std::string> skipped;  // derivation paths with errors, with reason
};

// Builds the signature from the library, writes it to sig_path, and writes
// one premise file per derivation (named after the conjecture) to out_dir.
Dataset4Summary build_dataset4(const std::string& library_path,
                               const std::string& derivations_dir,
                               const std::string& sig_path, const std::string& out_dir);

}  // namespace neuconj::dataset
