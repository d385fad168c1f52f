#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace neuconj::tptp {

enum class TokenKind {
  Word,          // [A-Za-z0-9_]+ and `$word`
  Quoted,        // '...' or "..." kept verbatim with its quotes
  Punctuation,   // ( ) [ ] , . : ! ? ~ & | = < > and => <=> !=
  Other,         // any other single byte
};

struct Token {
  TokenKind kind;
  std::string text;
  int line;
  int column;
};

// Lexes TPTP text. Comments (`%` to end of line, `/* ... */`) are dropped.
std::vector<Token> lex_tptp(std::string_view text);

// Token strings only; joining them with single spaces gives the
// space-separated style used by the tokenized-proof corpus.
std::vector<std::string> tokenize_tptp(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace neuconj::tptp
