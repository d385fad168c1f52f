#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neuconj/error.hpp"
#include "neuconj/prefix/signature.hpp"
#include "neuconj/tptp/ast.hpp"

namespace neuconj::prefix {

// A formula in prefix ("polish") notation. Each token is either `c<payload>`
// (a symbol or logical operator) or `b<k>`, a bound variable identified by
// the de Bruijn level of its binder (outermost binder is level 0).
using TokenLine = std::vector<std::string>;

enum class DecodeErrorKind {
  UnknownSymbol,
  TruncatedStream,
  TrailingTokens,
  MalformedVariable,
  KindMismatch,
  MalformedToken,
};

std::string_view to_string(DecodeErrorKind kind);

class DecodeError : public Error {
 public:
  DecodeError(DecodeErrorKind kind, std::size_t position, std::string detail);
  DecodeErrorKind kind() const { return kind_; }
  // Index of the offending token (== stream size for truncation).
  std::size_t position() const { return position_; }

 private:
  DecodeErrorKind kind_;
  std::size_t position_;
};

// Pre-order encoding. Quantifiers `c!` / `c?` are followed by the binder's
// `b<level>`; connectives are `c&`, `c|`, `c=>`, `c<=>`, `c~`; equality is
// `c=` and a negated equality is `c!=`. New symbols are registered in sig.
// Throws OpenFormula, ArityConflict or KindConflict.
TokenLine encode_formula(const tptp::Formula& f, SignatureMap& sig);

// Inverse of encode_formula up to bound variable names; the binder at
// level k is named X<k>.
tptp::Formula decode_tokens(std::span<const std::string> tokens, const SignatureMap& sig);

TokenLine split_line(std::string_view line);
std::string join_line(const TokenLine& tokens);

}  // namespace neuconj::prefix
