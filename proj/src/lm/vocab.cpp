#include "neuconj/lm/vocab.hpp"

#include <algorithm>
#include <cstdio>
#include <json.hpp>
#include <map>

#include "neuconj/tptp/tokenizer.hpp"

namespace neuconj::lm {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::string byte_token(unsigned char b) {
  if (b > 0x20 && b < 0x7f) return std::string(1, static_cast<char>(b));
  char buf[8];
  std::snprintf(buf, sizeof buf, "<0x%02X>", b);
  return buf;
}

// Inverse of byte_token; returns false for anything else.
bool byte_of(const std::string& tok, char& out) {
  if (tok.size() == 1) {
    out = tok[0];
    return true;
  }
  if (tok.size() == 6 && tok.compare(0, 3, "<0x") == 0 && tok[5] == '>') {
    out = static_cast<char>(std::stoi(tok.substr(3, 2), nullptr, 16));
    return true;
  }
  return false;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

const std::vector<std::string>& special_tokens() {
  static const std::vector<std::string> specials{"<pad>", "<bos>", "<eos>", "<nl>", "<unk>"};
  return specials;
}

std::string_view to_string(TokenizerKind k) {
  switch (k) {
    case TokenizerKind::Whitespace: return "whitespace";
    case TokenizerKind::Tptp: return "tptp";
    case TokenizerKind::Bytes: return "bytes";
  }
  return "?";
}

TokenizerKind tokenizer_from_string(std::string_view s) {
  if (s == "whitespace") return TokenizerKind::Whitespace;
  if (s == "tptp") return TokenizerKind::Tptp;
  if (s == "bytes") return TokenizerKind::Bytes;
  throw Error("unknown tokenizer '" + std::string(s) + "'");
}

std::vector<std::string> tokenize_document(std::string_view text, TokenizerKind kind) {
  const std::string& nl = special_tokens()[NEWLINE];
  std::vector<std::string> out;
  if (kind == TokenizerKind::Bytes) {
    for (char c : text) out.push_back(c == '\n' ? nl : byte_token(static_cast<unsigned char>(c)));
    return out;
  }
  bool first = true;
  for (auto line : lines_of(text)) {
    if (!first) out.push_back(nl);
    first = false;
    if (kind == TokenizerKind::Tptp) {
      for (auto& t : tptp::tokenize_tptp(line)) out.push_back(std::move(t));
      continue;
    }
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_space(line[i])) ++i;
      std::size_t j = i;
      while (j < line.size() && !is_space(line[j])) ++j;
      if (j > i) out.emplace_back(line.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> documents,
                             TokenizerKind kind) {
  std::map<std::string, std::size_t> counts;
  const auto& specials = special_tokens();
  for (const auto& doc : documents) {
    for (const auto& t : doc) {
      if (std::find(specials.begin(), specials.end(), t) == specials.end()) ++counts[t];
    }
  }
  if (counts.empty()) throw EmptyCorpus();
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens(specials.begin(), specials.end());
  for (auto& [tok, n] : ranked) tokens.push_back(tok);
  return from_tokens(std::move(tokens), kind);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens, TokenizerKind kind) {
  const auto& specials = special_tokens();
  if (tokens.size() < specials.size() ||
      !std::equal(specials.begin(), specials.end(), tokens.begin())) {
    throw Error("vocabulary must start with the reserved special tokens");
  }
  Vocabulary v;
  v.kind_ = kind;
  v.id_to_token_ = std::move(tokens);
  for (std::size_t i = 0; i < v.id_to_token_.size(); ++i) {
    if (!v.token_to_id_.emplace(v.id_to_token_[i], static_cast<int>(i)).second) {
      throw Error("duplicate vocabulary token '" + v.id_to_token_[i] + "'");
    }
  }
  return v;
}

int Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? UNK : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.count(std::string(token)) != 0;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw Error("token id " + std::to_string(id) + " out of range");
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<int> Vocabulary::encode_document(std::string_view text) const {
  const auto toks = tokenize_document(text, kind_);
  std::vector<int> ids{BOS};
  for (int i : encode(toks)) ids.push_back(i);
  ids.push_back(EOS);
  return ids;
}

std::string Vocabulary::decode(std::span<const int> ids) const {
  std::string out;
  bool line_start = true;
  for (int i : ids) {
    if (i == NEWLINE) {
      out += '\n';
      line_start = true;
      continue;
    }
    if (i < kNumReserved && i != UNK) continue;
    const std::string& tok = token(i);
    if (kind_ == TokenizerKind::Bytes) {
      char c;
      if (byte_of(tok, c)) out += c;
      continue;
    }
    if (!line_start) out += ' ';
    out += tok;
    line_start = false;
  }
  return out;
}

std::string Vocabulary::to_json() const {
  nlohmann::json j;
  j["tokenizer"] = std::string(to_string(kind_));
  j["tokens"] = id_to_token_;
  return j.dump();
}

Vocabulary Vocabulary::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return from_tokens(j.at("tokens").get<std::vector<std::string>>(),
                       tokenizer_from_string(j.at("tokenizer").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed vocabulary: ") + e.what());
  }
}

}  // namespace neuconj::lm
