#pragma once

// Completion service: decoding requests against a loaded checkpoint, plus
// the HTTP front end (POST /complete, GET /health).

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "neuconj/error.hpp"
#include "neuconj/eval/premises.hpp"
#include "neuconj/library.hpp"
#include "neuconj/lm/checkpoint.hpp"
#include "neuconj/prefix/signature.hpp"

namespace neuconj::service {

class BadRequest : public Error {
 public:
  using Error::Error;
};

class ServiceUnavailable : public Error {
 public:
  using Error::Error;
};

enum class CompletionMode { TextCompletion, PremisePrediction };

std::string_view to_string(CompletionMode m);

inline constexpr std::size_t kPromptReserve = 8;  // tokens kept free for the continuation

struct CompletionRequest {
  std::string prompt;
  CompletionMode mode = CompletionMode::TextCompletion;
  double temperature = 1.0;
  std::size_t top_k = 0;  // 0 = unlimited
  std::size_t beam_width = 10;
  std::size_t num_results = 10;
  std::size_t max_new_tokens = 64;
  std::uint64_t seed = 0;
};

// Missing fields keep their defaults. Throws BadRequest on malformed input.
CompletionRequest request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CompletionRequest& r);

struct ClassifiedLine {
  std::string line;
  eval::PremiseClass premise_class;
};

struct CompletionResult {
  std::string text;
  double score = 0;  // length-normalized log-probability
  std::optional<std::vector<ClassifiedLine>> premise_classes;
};

nlohmann::json to_json(const CompletionResult& r);

struct ServiceResources {
  lm::LoadedModel model;
  // Needed for premise_prediction only.
  std::optional<FormulaLibrary> library;
  std::optional<prefix::SignatureMap> signature;
};

ServiceResources load_resources(const std::string& checkpoint_path, const std::string& library_path,
                                const std::string& signature_path);

// Thread-safe. Requests are served once load() has been called; the
// resources are read-only afterwards.
class CompletionService {
 public:
  explicit CompletionService(std::size_t max_concurrent = 2);

  void load(ServiceResources resources);
  bool ready() const;

  // Throws ServiceUnavailable before load(), BadRequest on invalid requests.
  std::vector<CompletionResult> complete(const CompletionRequest& request) const;
  nlohmann::json health() const;

 private:
  std::vector<CompletionResult> complete_loaded(const ServiceResources& res,
                                                const CompletionRequest& request) const;

  std::shared_ptr<const ServiceResources> resources() const;

  mutable std::mutex mutex_;
  mutable std::condition_variable slot_free_;
  mutable std::size_t active_ = 0;
  std::size_t max_concurrent_;
  std::shared_ptr<const ServiceResources> resources_;
  std::chrono::steady_clock::time_point started_;
};

class HttpServer {
 public:
  // static_dir, when non-empty, is served under /.
  explicit HttpServer(CompletionService& service, std::string static_dir = {});
  ~HttpServer();

  // Returns the bound port; port 0 picks a free one.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace neuconj::service
