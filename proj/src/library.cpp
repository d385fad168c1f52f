#include "neuconj/library.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "neuconj/tptp/alpha.hpp"
#include "neuconj/tptp/parser.hpp"

namespace neuconj {

namespace fs = std::filesystem;

UnknownName::UnknownName(std::string name)
    : Error("unknown formula name " + name), name_(std::move(name)) {}

void FormulaLibrary::add(std::string name, tptp::Formula formula) {
  if (by_name_.count(name)) throw Error("duplicate library name " + name);
  if (!tptp::is_closed(formula)) formula = tptp::universal_closure(formula);
  const std::size_t index = entries_.size();
  by_alpha_.emplace(tptp::alpha_key(formula), index);
  by_name_.emplace(name, index);
  entries_.push_back(LibraryEntry{std::move(name), std::move(formula), index});
}

FormulaLibrary FormulaLibrary::from_problems(std::span<const tptp::Problem> problems) {
  FormulaLibrary lib;
  for (const auto& p : problems) {
    for (const auto& af : p.formulas) {
      if (const LibraryEntry* seen = lib.find(af.name)) {
        tptp::Formula closed =
            tptp::is_closed(af.formula) ? af.formula : tptp::universal_closure(af.formula);
        if (!tptp::alpha_equal(seen->formula, closed)) {
          throw Error("library name " + af.name + " bound to two different formulas");
        }
        continue;
      }
      lib.add(af.name, af.formula);
    }
  }
  return lib;
}

const LibraryEntry* FormulaLibrary::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  return it == by_name_.end() ? nullptr : &entries_[it->second];
}

const LibraryEntry& FormulaLibrary::at(std::string_view name) const {
  if (const LibraryEntry* e = find(name)) return *e;
  throw UnknownName(std::string(name));
}

const LibraryEntry* FormulaLibrary::find_alpha(const tptp::Formula& f) const {
  auto it = by_alpha_.find(tptp::alpha_key(f));
  return it == by_alpha_.end() ? nullptr : &entries_[it->second];
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path);
}

std::vector<tptp::Problem> load_problems(const std::string& path) {
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".p" || ext == ".ax")) {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<tptp::Problem> problems;
  for (const auto& f : files) {
    try {
      problems.push_back(tptp::parse_problem(read_file(f)));
    } catch (const tptp::SyntaxError& e) {
      throw IoError(f + ": " + e.what());
    }
  }
  return problems;
}

FormulaLibrary load_library(const std::string& path) {
  return FormulaLibrary::from_problems(load_problems(path));
}

}  // namespace neuconj
