#pragma once

#include <string>
#include <vector>

#include "neuconj/lm/vocab.hpp"

namespace neuconj::lm {

// A directory yields one document per regular file (name order); a file is
// split into documents at blank lines.
std::vector<std::string> load_documents(const std::string& path);

// Concatenation of BOS tokens EOS for every document.
std::vector<int> encode_corpus(const std::vector<std::string>& documents, const Vocabulary& vocab);

std::vector<std::vector<std::string>> tokenize_documents(const std::vector<std::string>& documents,
                                                         TokenizerKind kind);

}  // namespace neuconj::lm
