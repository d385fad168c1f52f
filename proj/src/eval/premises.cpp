#include "neuconj/eval/premises.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <unordered_set>

#include "neuconj/tptp/alpha.hpp"

namespace neuconj::eval {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSampleSeparator = "___";

}  // namespace

Prediction parse_prediction(const std::string& file_name, std::string_view text) {
  Prediction p;
  const auto sep = file_name.rfind(kSampleSeparator);
  if (sep == std::string::npos) {
    p.conjecture_name = file_name;
  } else {
    p.conjecture_name = file_name.substr(0, sep);
    const std::string idx = file_name.substr(sep + kSampleSeparator.size());
    if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw IoError("bad sample index in prediction file name '" + file_name + "'");
    }
    p.sample_index = std::stoul(idx);
  }
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") != std::string::npos) p.lines.push_back(std::move(line));
    start = end + 1;
  }
  return p;
}

std::string prediction_file_name(const Prediction& p) {
  return p.conjecture_name + std::string(kSampleSeparator) + std::to_string(p.sample_index);
}

std::vector<Prediction> load_predictions(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("prediction directory not found: " + dir);
  std::vector<Prediction> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    out.push_back(parse_prediction(e.path().filename().string(), read_file(e.path().string())));
  }
  std::sort(out.begin(), out.end(), [](const Prediction& a, const Prediction& b) {
    if (a.conjecture_name != b.conjecture_name) return a.conjecture_name < b.conjecture_name;
    return a.sample_index < b.sample_index;
  });
  return out;
}

void write_prediction(const std::string& dir, const Prediction& p) {
  fs::create_directories(dir);
  std::string text;
  for (const auto& l : p.lines) text += l + "\n";
  write_file((fs::path(dir) / prediction_file_name(p)).string(), text);
}

std::vector<Prediction> dedup(std::vector<Prediction> predictions) {
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  std::vector<Prediction> out;
  for (auto& p : predictions) {
    if (seen.emplace(p.conjecture_name, p.lines).second) out.push_back(std::move(p));
  }
  return out;
}

DecodeResult decode_line(std::string_view line, const prefix::SignatureMap& sig) {
  try {
    return prefix::decode_tokens(prefix::split_line(line), sig);
  } catch (const prefix::DecodeError& e) {
    return DecodeFailure{e.kind(), e.what()};
  }
}

PremiseClass classify_premise(const DecodeResult& decoded, const FormulaLibrary& library) {
  if (const auto* fail = std::get_if<DecodeFailure>(&decoded)) {
    return Unparsable{std::string(prefix::to_string(fail->kind))};
  }
  const auto& f = std::get<tptp::Formula>(decoded);
  if (const LibraryEntry* e = library.find_alpha(f)) return Known{e->name, e->chrono_index};
  return NewConjecture{f};
}

AssembledProblem assemble_problem(const std::string& conjecture,
                                  std::span<const PremiseClass> premises,
                                  const FormulaLibrary& library, const AssembleOptions& opts) {
  const LibraryEntry& goal = library.at(conjecture);
  AssembledProblem out;
  std::unordered_set<std::string> seen_keys{tptp::alpha_key(goal.formula)};
  std::unordered_set<std::string> used_names{goal.name};
  std::size_t new_index = 0;

  auto add_axiom = [&](std::string name, const tptp::Formula& f) {
    out.axiom_names.push_back(name);
    out.problem.formulas.push_back({std::move(name), tptp::Role::Axiom, f, tptp::Language::Fof});
  };

  for (const auto& pc : premises) {
    if (std::holds_alternative<Unparsable>(pc)) {
      ++out.dropped_unparsable;
      continue;
    }
    const tptp::Formula& f = std::holds_alternative<Known>(pc)
                                 ? library.at(std::get<Known>(pc).name).formula
                                 : std::get<NewConjecture>(pc).formula;
    if (tptp::alpha_equal(f, goal.formula)) {
      out.proposed_self = true;
      continue;
    }
    if (!seen_keys.insert(tptp::alpha_key(f)).second) {
      ++out.dropped_duplicates;
      continue;
    }
    if (const auto* k = std::get_if<Known>(&pc)) {
      if (opts.strict_chronology && k->chrono_index >= goal.chrono_index) {
        ++out.dropped_chronology;
        continue;
      }
      used_names.insert(k->name);
      add_axiom(k->name, f);
    } else {
      std::string name;
      do {
        name = "new_" + std::to_string(++new_index);
      } while (library.find(name) || used_names.count(name));
      used_names.insert(name);
      out.has_new_conjecture = true;
      add_axiom(std::move(name), f);
    }
  }
  out.problem.formulas.push_back({goal.name, tptp::Role::Conjecture, goal.formula, tptp::Language::Fof});
  return out;
}

}  // namespace neuconj::eval
