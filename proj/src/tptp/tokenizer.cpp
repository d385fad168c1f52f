#include "neuconj/tptp/tokenizer.hpp"

#include <cctype>

namespace neuconj::tptp {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_single_punct(char c) {
  switch (c) {
    case '(': case ')': case '[': case ']': case ',': case '.': case ':':
    case '!': case '?': case '~': case '&': case '|': case '=': case '<':
    case '>':
      return true;
    default:
      return false;
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else if (c == '/' && peek(1) == '*') {
        advance(2);
        while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) advance(1);
        advance(pos_ < text_.size() ? 2 : 0);
      } else if (is_word_char(c)) {
        emit(out, TokenKind::Word, word_length(pos_));
      } else if (c == '$' && is_word_char(peek(1))) {
        emit(out, TokenKind::Word, 1 + word_length(pos_ + 1));
      } else if (c == '\'' || c == '"') {
        const std::size_t len = quoted_length(c);
        if (len == 0) {
          emit(out, TokenKind::Other, 1);
        } else {
          emit(out, TokenKind::Quoted, len);
        }
      } else if (text_.substr(pos_, 3) == "<=>") {
        emit(out, TokenKind::Punctuation, 3);
      } else if (text_.substr(pos_, 2) == "=>" || text_.substr(pos_, 2) == "!=") {
        emit(out, TokenKind::Punctuation, 2);
      } else if (is_single_punct(c)) {
        emit(out, TokenKind::Punctuation, 1);
      } else {
        emit(out, TokenKind::Other, 1);
      }
    }
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  std::size_t word_length(std::size_t from) const {
    std::size_t end = from;
    while (end < text_.size() && is_word_char(text_[end])) ++end;
    return end - from;
  }

  // Length including both quotes, or 0 when the quote is unterminated.
  std::size_t quoted_length(char quote) const {
    std::size_t i = pos_ + 1;
    while (i < text_.size()) {
      if (text_[i] == '\\' && i + 1 < text_.size()) {
        i += 2;
        continue;
      }
      if (text_[i] == quote) return i + 1 - pos_;
      if (text_[i] == '\n') return 0;
      ++i;
    }
    return 0;
  }

  void emit(std::vector<Token>& out, TokenKind kind, std::size_t len) {
    out.push_back(Token{kind, std::string(text_.substr(pos_, len)), line_, column_});
    advance(len);
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> lex_tptp(std::string_view text) { return Lexer(text).run(); }

std::vector<std::string> tokenize_tptp(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : lex_tptp(text)) out.push_back(std::move(t.text));
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace neuconj::tptp
