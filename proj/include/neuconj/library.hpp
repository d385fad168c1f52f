#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "neuconj/error.hpp"
#include "neuconj/tptp/ast.hpp"

namespace neuconj {

class UnknownName : public Error {
 public:
  explicit UnknownName(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct LibraryEntry {
  std::string name;
  tptp::Formula formula;
  std::size_t chrono_index;
};

// Named closed formulas in library (chronological) order, indexed by name
// and by alpha-equivalence class.
class FormulaLibrary {
 public:
  // Appends with chrono_index = current size. Open formulas are universally
  // closed. Throws Error on a duplicate name.
  void add(std::string name, tptp::Formula formula);

  // Every statement of every problem in order. A name seen again with an
  // alpha-equal formula is skipped (problem files repeat shared axioms);
  // with a different formula it is an error.
  static FormulaLibrary from_problems(std::span<const tptp::Problem> problems);

  const LibraryEntry* find(std::string_view name) const;
  const LibraryEntry& at(std::string_view name) const;  // throws UnknownName
  // Earliest entry alpha-equal to f, if any. f must be closed.
  const LibraryEntry* find_alpha(const tptp::Formula& f) const;

  const std::vector<LibraryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<LibraryEntry> entries_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::unordered_map<std::string, std::size_t> by_alpha_;
};

// Loads a TPTP file, or every *.p / *.ax file of a directory in name order.
FormulaLibrary load_library(const std::string& path);
std::vector<tptp::Problem> load_problems(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace neuconj
