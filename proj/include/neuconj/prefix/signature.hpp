#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "neuconj/error.hpp"
#include "neuconj/tptp/ast.hpp"

namespace neuconj::prefix {

enum class SymbolKind { Function, Predicate };

std::string_view to_string(SymbolKind kind);

struct SymbolInfo {
  SymbolKind kind;
  std::size_t arity;
  bool operator==(const SymbolInfo&) const = default;
};

class ArityConflict : public Error {
 public:
  ArityConflict(std::string symbol, std::size_t first, std::size_t second);
  const std::string& symbol() const { return symbol_; }
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }

 private:
  std::string symbol_;
  std::size_t first_;
  std::size_t second_;
};

// A symbol used both as a function and as a predicate.
class KindConflict : public Error {
 public:
  explicit KindConflict(std::string symbol);
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

// symbol -> (kind, arity). Arity is what makes the punctuation-free prefix
// stream decodable. Logical tokens are never entries: only identifiers
// matching the TPTP symbol syntax can be registered.
class SignatureMap {
 public:
  // Adds the symbol, or checks it against the existing entry.
  void add(std::string_view symbol, SymbolKind kind, std::size_t arity);
  void add_formula(const tptp::Formula& f);

  const SymbolInfo* find(std::string_view symbol) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, SymbolInfo, std::less<>>& entries() const { return entries_; }

  // Sorted `symbol kind arity` lines.
  std::string to_text() const;
  static SignatureMap from_text(std::string_view text);

  bool operator==(const SignatureMap&) const = default;

 private:
  std::map<std::string, SymbolInfo, std::less<>> entries_;
};

// Registers every symbol of every formula. The result, including which
// conflict is reported, does not depend on the order of the input.
SignatureMap build_signature(std::span<const tptp::Problem> problems);

SignatureMap load_signature(const std::string& path);
void save_signature(const SignatureMap& sig, const std::string& path);

}  // namespace neuconj::prefix
