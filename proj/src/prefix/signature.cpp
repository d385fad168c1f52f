#include "neuconj/prefix/signature.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace neuconj::prefix {

std::string_view to_string(SymbolKind kind) {
  return kind == SymbolKind::Function ? "function" : "predicate";
}

ArityConflict::ArityConflict(std::string symbol, std::size_t first, std::size_t second)
    : Error("arity conflict for symbol " + symbol + ": " + std::to_string(first) + " vs " +
            std::to_string(second)),
      symbol_(std::move(symbol)),
      first_(first),
      second_(second) {}

KindConflict::KindConflict(std::string symbol)
    : Error("symbol " + symbol + " used both as function and predicate"),
      symbol_(std::move(symbol)) {}

void SignatureMap::add(std::string_view symbol, SymbolKind kind, std::size_t arity) {
  if (!tptp::is_symbol_name(symbol)) {
    throw Error("invalid signature symbol '" + std::string(symbol) + "'");
  }
  auto it = entries_.find(symbol);
  if (it == entries_.end()) {
    entries_.emplace(std::string(symbol), SymbolInfo{kind, arity});
    return;
  }
  if (it->second.kind != kind) throw KindConflict(std::string(symbol));
  if (it->second.arity != arity) throw ArityConflict(std::string(symbol), it->second.arity, arity);
}

namespace {

template <class Sink>
void visit_term_symbols(const tptp::Term& t, Sink& sink) {
  if (const auto* a = std::get_if<tptp::Application>(&t.node)) {
    sink(a->symbol, SymbolKind::Function, a->args.size());
    for (const auto& arg : a->args) visit_term_symbols(arg, sink);
  }
}

template <class Sink>
void visit_symbols(const tptp::Formula& f, Sink& sink) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, tptp::Quantified>) {
          visit_symbols(*n.body, sink);
        } else if constexpr (std::is_same_v<N, tptp::Binary>) {
          visit_symbols(*n.left, sink);
          visit_symbols(*n.right, sink);
        } else if constexpr (std::is_same_v<N, tptp::Negation>) {
          visit_symbols(*n.body, sink);
        } else if constexpr (std::is_same_v<N, tptp::Equality>) {
          visit_term_symbols(n.left, sink);
          visit_term_symbols(n.right, sink);
        } else {
          sink(n.predicate, SymbolKind::Predicate, n.args.size());
          for (const auto& arg : n.args) visit_term_symbols(arg, sink);
        }
      },
      f.node);
}

}  // namespace

void SignatureMap::add_formula(const tptp::Formula& f) {
  auto sink = [this](const std::string& s, SymbolKind k, std::size_t arity) { add(s, k, arity); };
  visit_symbols(f, sink);
}

const SymbolInfo* SignatureMap::find(std::string_view symbol) const {
  auto it = entries_.find(symbol);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string SignatureMap::to_text() const {
  std::string out;
  for (const auto& [name, info] : entries_) {
    out += name;
    out += ' ';
    out += to_string(info.kind);
    out += ' ';
    out += std::to_string(info.arity);
    out += '\n';
  }
  return out;
}

SignatureMap SignatureMap::from_text(std::string_view text) {
  SignatureMap sig;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string name, kind;
    long long arity = -1;
    if (!(fields >> name >> kind >> arity) || arity < 0 ||
        (kind != "function" && kind != "predicate")) {
      throw IoError("malformed signature line " + std::to_string(lineno) + ": " + line);
    }
    sig.add(name, kind == "function" ? SymbolKind::Function : SymbolKind::Predicate,
            static_cast<std::size_t>(arity));
  }
  return sig;
}

SignatureMap build_signature(std::span<const tptp::Problem> problems) {
  using Usage = std::pair<SymbolKind, std::size_t>;
  std::map<std::string, std::set<Usage>> usages;
  auto sink = [&](const std::string& s, SymbolKind k, std::size_t arity) {
    usages[s].insert({k, arity});
  };
  for (const auto& p : problems) {
    for (const auto& af : p.formulas) visit_symbols(af.formula, sink);
  }
  SignatureMap sig;
  for (const auto& [symbol, uses] : usages) {
    std::set<SymbolKind> kinds;
    for (const auto& u : uses) kinds.insert(u.first);
    if (kinds.size() > 1) throw KindConflict(symbol);
    if (uses.size() > 1) {
      auto it = uses.begin();
      const std::size_t first = it->second;
      throw ArityConflict(symbol, first, std::next(it)->second);
    }
    sig.add(symbol, uses.begin()->first, uses.begin()->second);
  }
  return sig;
}

SignatureMap load_signature(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read signature file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return SignatureMap::from_text(buf.str());
}

void save_signature(const SignatureMap& sig, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write signature file " + path);
  out << sig.to_text();
}

}  // namespace neuconj::prefix
