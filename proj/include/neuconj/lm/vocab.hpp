#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "neuconj/error.hpp"

namespace neuconj::lm {

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("corpus contains no tokens") {}
};

// Reserved ids. UNK sits right after the four structural specials.
inline constexpr int PAD = 0;
inline constexpr int BOS = 1;
inline constexpr int EOS = 2;
inline constexpr int NEWLINE = 3;
inline constexpr int UNK = 4;
inline constexpr int kNumReserved = 5;

// How raw text becomes tokens.
//   Whitespace: maximal runs of non-space bytes (prefix premise lines).
//   Tptp:       the TPTP lexer (tokenized proofs).
//   Bytes:      one token per byte (plain article text).
// Line breaks become NEWLINE in every mode.
enum class TokenizerKind { Whitespace, Tptp, Bytes };

std::string_view to_string(TokenizerKind k);
TokenizerKind tokenizer_from_string(std::string_view s);  // throws Error

// Token strings of one document; line breaks appear as the NEWLINE string.
std::vector<std::string> tokenize_document(std::string_view text, TokenizerKind kind);

class Vocabulary {
 public:
  // Specials first, then tokens by descending frequency, ties
  // lexicographically. Throws EmptyCorpus when there is no ordinary token.
  static Vocabulary build(std::span<const std::vector<std::string>> documents,
                          TokenizerKind kind);
  // Rebuilds from an id-ordered token list whose first entries are the
  // reserved specials.
  static Vocabulary from_tokens(std::vector<std::string> tokens, TokenizerKind kind);

  std::size_t size() const { return id_to_token_.size(); }
  TokenizerKind kind() const { return kind_; }
  int id(std::string_view token) const;  // UNK when absent
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;  // throws Error when out of range
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  std::vector<int> encode(std::span<const std::string> tokens) const;
  // Tokens of `text` framed as BOS ... EOS.
  std::vector<int> encode_document(std::string_view text) const;
  // Text of ids with specials other than NEWLINE dropped. Whitespace and
  // Tptp tokens are joined by single spaces.
  std::string decode(std::span<const int> ids) const;

  std::string to_json() const;
  static Vocabulary from_json(const std::string& text);

  bool operator==(const Vocabulary& o) const {
    return kind_ == o.kind_ && id_to_token_ == o.id_to_token_;
  }

 private:
  TokenizerKind kind_ = TokenizerKind::Whitespace;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, int> token_to_id_;
};

const std::vector<std::string>& special_tokens();  // "<pad>" "<bos>" "<eos>" "<nl>" "<unk>"

}  // namespace neuconj::lm
