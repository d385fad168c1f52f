#include "neuconj/dataset/builders.hpp"

#include <algorithm>
#include <filesystem>
#include <unordered_set>

#include "neuconj/prefix/codec.hpp"
#include "neuconj/tptp/tokenizer.hpp"

namespace neuconj::dataset {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

void rtrim(std::string& s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
}

std::string strip_article(std::string_view text) {
  std::vector<std::string> kept;
  for (auto& line : split_lines(text)) {
    if (auto c = line.find("::"); c != std::string::npos) line.erase(c);
    rtrim(line);
    if (line.empty() && (kept.empty() || kept.back().empty())) continue;
    kept.push_back(std::move(line));
  }
  while (!kept.empty() && kept.back().empty()) kept.pop_back();
  std::string out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (i) out += '\n';
    out += kept[i];
  }
  return out;
}

std::string join_blocks(const std::vector<std::string>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    if (b.empty()) continue;
    if (!out.empty()) out += "\n\n";
    out += b;
  }
  return out;
}

// `file ( 'path' , name ...` inside a statement's source annotation.
std::string file_source_name(const std::vector<std::string>& stmt) {
  for (std::size_t i = 0; i + 4 < stmt.size(); ++i) {
    if (stmt[i] == "file" && stmt[i + 1] == "(" && !stmt[i + 2].empty() &&
        (stmt[i + 2].front() == '\'' || stmt[i + 2].front() == '"') && stmt[i + 3] == ",") {
      return stmt[i + 4];
    }
  }
  return {};
}

// `inference(assume_negation, [...], [name])` names the original conjecture.
std::string negation_source_name(const std::vector<std::string>& stmt) {
  if (std::find(stmt.begin(), stmt.end(), "assume_negation") == stmt.end()) return {};
  for (std::size_t i = stmt.size(); i-- > 1;) {
    if (stmt[i] == "]") return stmt[i - 1] == "[" ? std::string() : stmt[i - 1];
  }
  return {};
}

struct StatementHead {
  std::string name;
  std::string role;
};

bool read_head(const std::vector<std::string>& stmt, StatementHead& head) {
  if (stmt.size() < 5) return false;
  if (stmt[0] != "fof" && stmt[0] != "cnf" && stmt[0] != "tff" && stmt[0] != "thf") return false;
  if (stmt[1] != "(" || stmt[3] != ",") return false;
  head.name = stmt[2];
  head.role = stmt[4];
  return true;
}

}  // namespace

std::string build_concatenated(const std::vector<std::string>& files) {
  std::vector<std::string> blocks;
  blocks.reserve(files.size());
  for (const auto& f : files) blocks.push_back(strip_article(f));
  return join_blocks(blocks);
}

std::vector<std::vector<std::string>> split_statements(std::string_view text) {
  // E prints its own status chatter as `#` lines around the derivation.
  std::string cleaned;
  for (const auto& line : split_lines(text)) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    cleaned += line;
    cleaned += '\n';
  }
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  int depth = 0;
  for (auto& tok : tptp::lex_tptp(cleaned)) {
    if (tok.text == "(" || tok.text == "[") ++depth;
    if (tok.text == ")" || tok.text == "]") --depth;
    const bool ends = tok.text == "." && depth <= 0;
    current.push_back(std::move(tok.text));
    if (ends) {
      out.push_back(std::move(current));
      current.clear();
      depth = 0;
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::string build_tokenized_proofs(const std::vector<std::string>& derivations) {
  std::vector<std::string> blocks;
  for (const auto& d : derivations) {
    std::string block;
    for (const auto& stmt : split_statements(d)) {
      if (!block.empty()) block += '\n';
      block += tptp::join_tokens(stmt);
    }
    blocks.push_back(std::move(block));
  }
  return join_blocks(blocks);
}

ProofManifest extract_premise_order(std::string_view derivation) {
  std::string conjecture;
  std::string negated;
  std::vector<std::string> axioms;
  for (const auto& stmt : split_statements(derivation)) {
    StatementHead head;
    if (!read_head(stmt, head)) continue;
    std::string source = file_source_name(stmt);
    if (head.role == "axiom") {
      axioms.push_back(source.empty() ? head.name : source);
    } else if (head.role == "conjecture" && conjecture.empty()) {
      conjecture = source.empty() ? head.name : source;
    } else if (head.role == "negated_conjecture" && negated.empty()) {
      if (source.empty()) source = negation_source_name(stmt);
      negated = source.empty() ? head.name : source;
    }
  }
  if (conjecture.empty()) conjecture = negated;
  if (conjecture.empty()) throw NoConjecture();

  ProofManifest m;
  m.conjecture_name = conjecture;
  std::unordered_set<std::string> seen{conjecture};
  for (auto& a : axioms) {
    if (seen.insert(a).second) m.ordered_premises.push_back(std::move(a));
  }
  return m;
}

std::string build_prefix_premise_file(const ProofManifest& manifest,
                                      const FormulaLibrary& library,
                                      prefix::SignatureMap& sig) {
  std::string out;
  auto emit = [&](const std::string& name) {
    out += prefix::join_line(prefix::encode_formula(library.at(name).formula, sig));
    out += '\n';
  };
  emit(manifest.conjecture_name);
  for (const auto& p : manifest.ordered_premises) emit(p);
  return out;
}

void build_corpus(const CorpusSpec& spec) {
  std::vector<std::string> inputs;
  inputs.reserve(spec.input_paths.size());
  for (const auto& p : spec.input_paths) inputs.push_back(read_file(p));
  std::string text;
  switch (spec.dataset_kind) {
    case DatasetKind::ConcatenatedText: text = build_concatenated(inputs); break;
    case DatasetKind::TokenizedProofs: text = build_tokenized_proofs(inputs); break;
    case DatasetKind::PrefixPremises:
      throw Error("prefix premise corpora are built with build_dataset4");
  }
  if (!text.empty()) text += '\n';
  write_file(spec.output_path, text);
}

Dataset4Summary build_dataset4(const std::string& library_path,
                               const std::string& derivations_dir,
                               const std::string& sig_path, const std::string& out_dir) {
  const auto problems = load_problems(library_path);
  const FormulaLibrary library = FormulaLibrary::from_problems(problems);
  prefix::SignatureMap sig = prefix::build_signature(problems);

  std::vector<fs::path> derivations;
  for (const auto& entry : fs::directory_iterator(derivations_dir)) {
    if (entry.is_regular_file()) derivations.push_back(entry.path());
  }
  std::sort(derivations.begin(), derivations.end());
  fs::create_directories(out_dir);

  Dataset4Summary summary;
  for (const auto& path : derivations) {
    try {
      const ProofManifest m = extract_premise_order(read_file(path.string()));
      const std::string text = build_prefix_premise_file(m, library, sig);
      write_file((fs::path(out_dir) / m.conjecture_name).string(), text);
      ++summary.files_written;
    } catch (const Error& e) {
      summary.skipped.push_back(path.string() + ": " + e.what());
    }
  }
  prefix::save_signature(sig, sig_path);
  return summary;
}

}  // namespace neuconj::dataset
