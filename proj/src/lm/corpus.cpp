#include "neuconj/lm/corpus.hpp"

#include <algorithm>
#include <filesystem>

#include "neuconj/library.hpp"

namespace neuconj::lm {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_blocks(const std::string& text) {
  std::vector<std::string> docs;
  std::string current;
  std::size_t start = 0;
  auto flush = [&] {
    if (!current.empty()) docs.push_back(std::move(current));
    current.clear();
  };
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
    } else {
      if (!current.empty()) current += '\n';
      current += line;
    }
    start = end + 1;
  }
  flush();
  return docs;
}

}  // namespace

std::vector<std::string> load_documents(const std::string& path) {
  if (!fs::is_directory(path)) return split_blocks(read_file(path));
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> docs;
  for (const auto& f : files) {
    std::string text = read_file(f.string());
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    if (!text.empty()) docs.push_back(std::move(text));
  }
  return docs;
}

std::vector<std::vector<std::string>> tokenize_documents(const std::vector<std::string>& documents,
                                                         TokenizerKind kind) {
  std::vector<std::vector<std::string>> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(tokenize_document(d, kind));
  return out;
}

std::vector<int> encode_corpus(const std::vector<std::string>& documents, const Vocabulary& vocab) {
  std::vector<int> ids;
  for (const auto& d : documents) {
    const auto doc = vocab.encode_document(d);
    ids.insert(ids.end(), doc.begin(), doc.end());
  }
  return ids;
}

}  // namespace neuconj::lm
