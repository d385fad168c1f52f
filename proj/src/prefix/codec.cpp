#include "neuconj/prefix/codec.hpp"

#include <charconv>
#include <optional>

#include "neuconj/tptp/alpha.hpp"

namespace neuconj::prefix {

using namespace neuconj::tptp;

std::string_view to_string(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::UnknownSymbol: return "UnknownSymbol";
    case DecodeErrorKind::TruncatedStream: return "TruncatedStream";
    case DecodeErrorKind::TrailingTokens: return "TrailingTokens";
    case DecodeErrorKind::MalformedVariable: return "MalformedVariable";
    case DecodeErrorKind::KindMismatch: return "KindMismatch";
    case DecodeErrorKind::MalformedToken: return "MalformedToken";
  }
  return "MalformedToken";
}

DecodeError::DecodeError(DecodeErrorKind kind, std::size_t position, std::string detail)
    : Error(std::string(to_string(kind)) + " at token " + std::to_string(position) +
            (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      position_(position) {}

namespace {

class Encoder {
 public:
  TokenLine run(const Formula& f) {
    formula(f);
    return std::move(out_);
  }

 private:
  std::size_t level_of(const std::string& name) const {
    for (std::size_t i = binders_.size(); i-- > 0;) {
      if (binders_[i] == name) return i;
    }
    throw OpenFormula(name);
  }

  void term(const Term& t) {
    if (const auto* v = std::get_if<Variable>(&t.node)) {
      out_.push_back("b" + std::to_string(level_of(v->name)));
      return;
    }
    const auto& a = std::get<Application>(t.node);
    out_.push_back("c" + a.symbol);
    for (const auto& arg : a.args) term(arg);
  }

  void formula(const Formula& f) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Quantified>) {
            out_.push_back(n.kind == Quantifier::Forall ? "c!" : "c?");
            out_.push_back("b" + std::to_string(binders_.size()));
            binders_.push_back(n.variable);
            formula(*n.body);
            binders_.pop_back();
          } else if constexpr (std::is_same_v<N, Binary>) {
            out_.push_back("c" + std::string(to_string(n.connective)));
            formula(*n.left);
            formula(*n.right);
          } else if constexpr (std::is_same_v<N, Negation>) {
            out_.push_back("c~");
            formula(*n.body);
          } else if constexpr (std::is_same_v<N, Equality>) {
            out_.push_back(n.negated ? "c!=" : "c=");
            term(n.left);
            term(n.right);
          } else {
            out_.push_back("c" + n.predicate);
            for (const auto& arg : n.args) term(arg);
          }
        },
        f.node);
  }

  std::vector<std::string> binders_;
  TokenLine out_;
};

std::optional<Connective> connective_of(std::string_view payload) {
  if (payload == "&") return Connective::And;
  if (payload == "|") return Connective::Or;
  if (payload == "=>") return Connective::Implies;
  if (payload == "<=>") return Connective::Iff;
  return std::nullopt;
}

bool is_logical(std::string_view payload) {
  return payload == "!" || payload == "?" || payload == "~" || payload == "=" ||
         payload == "!=" || connective_of(payload).has_value();
}

std::string variable_name(std::size_t level) { return "X" + std::to_string(level); }

class Decoder {
 public:
  Decoder(std::span<const std::string> tokens, const SignatureMap& sig)
      : tokens_(tokens), sig_(sig) {}

  Formula run() {
    Formula f = formula();
    if (pos_ != tokens_.size()) {
      throw DecodeError(DecodeErrorKind::TrailingTokens, pos_, tokens_[pos_]);
    }
    if (unbound_) throw *unbound_;
    return f;
  }

 private:
  struct Parsed {
    bool is_variable;
    std::string_view payload;  // symbol payload, or digits for variables
    std::size_t level;
  };

  Parsed next() {
    if (pos_ >= tokens_.size()) {
      throw DecodeError(DecodeErrorKind::TruncatedStream, pos_, "");
    }
    const std::string& tok = tokens_[pos_];
    if (tok.size() >= 2 && tok[0] == 'c') {
      ++pos_;
      return {false, std::string_view(tok).substr(1), 0};
    }
    if (tok.size() >= 2 && tok[0] == 'b') {
      std::size_t level = 0;
      const char* first = tok.data() + 1;
      const char* last = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(first, last, level);
      if (ec == std::errc() && ptr == last) {
        ++pos_;
        return {true, std::string_view(tok).substr(1), level};
      }
    }
    throw DecodeError(DecodeErrorKind::MalformedToken, pos_, tok);
  }

  Term term() {
    const std::size_t at = pos_;
    Parsed p = next();
    if (p.is_variable) {
      // Reported only once the tree is known to be complete, so a cut-off
      // stream reads as truncated rather than as a scoping error.
      if (p.level >= depth_ && !unbound_) {
        unbound_ = DecodeError(DecodeErrorKind::MalformedVariable, at,
                               "level " + std::to_string(p.level) + " with " +
                                   std::to_string(depth_) + " enclosing binders");
      }
      return var(variable_name(p.level));
    }
    if (is_logical(p.payload)) {
      throw DecodeError(DecodeErrorKind::KindMismatch, at,
                        "logical token c" + std::string(p.payload) + " in term position");
    }
    const SymbolInfo* info = sig_.find(p.payload);
    if (!info) throw DecodeError(DecodeErrorKind::UnknownSymbol, at, std::string(p.payload));
    if (info->kind != SymbolKind::Function) {
      throw DecodeError(DecodeErrorKind::KindMismatch, at,
                        "predicate " + std::string(p.payload) + " in term position");
    }
    std::vector<Term> args;
    args.reserve(info->arity);
    for (std::size_t i = 0; i < info->arity; ++i) args.push_back(term());
    return app(std::string(p.payload), std::move(args));
  }

  Formula formula() {
    const std::size_t at = pos_;
    Parsed p = next();
    if (p.is_variable) {
      throw DecodeError(DecodeErrorKind::MalformedVariable, at, "variable in formula position");
    }
    if (p.payload == "!" || p.payload == "?") {
      const std::size_t binder_at = pos_;
      Parsed b = next();
      if (!b.is_variable || b.level != depth_) {
        throw DecodeError(DecodeErrorKind::MalformedVariable, binder_at,
                          "expected binder b" + std::to_string(depth_));
      }
      ++depth_;
      Formula body = formula();
      --depth_;
      return Formula{Quantified{p.payload == "!" ? Quantifier::Forall : Quantifier::Exists,
                                variable_name(b.level), std::move(body)}};
    }
    if (auto c = connective_of(p.payload)) {
      Formula left = formula();
      Formula right = formula();
      return binary(*c, std::move(left), std::move(right));
    }
    if (p.payload == "~") return neg(formula());
    if (p.payload == "=" || p.payload == "!=") {
      Term left = term();
      Term right = term();
      return Formula{Equality{std::move(left), std::move(right), p.payload == "!="}};
    }
    const SymbolInfo* info = sig_.find(p.payload);
    if (!info) throw DecodeError(DecodeErrorKind::UnknownSymbol, at, std::string(p.payload));
    if (info->kind != SymbolKind::Predicate) {
      throw DecodeError(DecodeErrorKind::KindMismatch, at,
                        "function " + std::string(p.payload) + " in formula position");
    }
    std::vector<Term> args;
    args.reserve(info->arity);
    for (std::size_t i = 0; i < info->arity; ++i) args.push_back(term());
    return atom(std::string(p.payload), std::move(args));
  }

  std::span<const std::string> tokens_;
  const SignatureMap& sig_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  std::optional<DecodeError> unbound_;
};

}  // namespace

TokenLine encode_formula(const Formula& f, SignatureMap& sig) {
  // Validate every symbol before touching sig so a conflict leaves it unchanged.
  SignatureMap used;
  used.add_formula(f);
  for (const auto& [name, info] : used.entries()) {
    if (const SymbolInfo* known = sig.find(name)) {
      if (known->kind != info.kind) throw KindConflict(name);
      if (known->arity != info.arity) throw ArityConflict(name, known->arity, info.arity);
    }
  }
  TokenLine out = Encoder{}.run(f);
  for (const auto& [name, info] : used.entries()) sig.add(name, info.kind, info.arity);
  return out;
}

Formula decode_tokens(std::span<const std::string> tokens, const SignatureMap& sig) {
  return Decoder(tokens, sig).run();
}

TokenLine split_line(std::string_view line) {
  TokenLine out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_line(const TokenLine& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace neuconj::prefix
