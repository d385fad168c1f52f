#include "neuconj/service/completion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "neuconj/lm/decode.hpp"
#include "neuconj/tptp/printer.hpp"

namespace neuconj::service {

using nlohmann::json;

std::string_view to_string(CompletionMode m) {
  return m == CompletionMode::TextCompletion ? "text_completion" : "premise_prediction";
}

namespace {

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw BadRequest(std::string("field '") + key + "' has the wrong type");
  }
}

void read_count(const json& j, const char* key, std::size_t& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  const json& v = j.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw BadRequest(std::string("field '") + key + "' must be a non-negative integer");
  }
  out = v.get<std::size_t>();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(std::move(line));
    start = end + 1;
  }
  return out;
}

json class_json(const eval::PremiseClass& c) {
  if (const auto* k = std::get_if<eval::Known>(&c)) {
    return {{"class", "known"}, {"name", k->name}, {"chrono_index", k->chrono_index}};
  }
  if (const auto* n = std::get_if<eval::NewConjecture>(&c)) {
    return {{"class", "new"}, {"formula", tptp::print_formula(n->formula)}};
  }
  return {{"class", "unparsable"}, {"reason", std::get<eval::Unparsable>(c).reason}};
}

}  // namespace

CompletionRequest request_from_json(const json& j) {
  if (!j.is_object()) throw BadRequest("request must be a JSON object");
  CompletionRequest r;
  read_field(j, "prompt", r.prompt);
  if (j.contains("mode")) {
    std::string mode;
    read_field(j, "mode", mode);
    if (mode == "text_completion") r.mode = CompletionMode::TextCompletion;
    else if (mode == "premise_prediction") r.mode = CompletionMode::PremisePrediction;
    else throw BadRequest("unknown mode '" + mode + "'");
  }
  if (j.contains("temperature") && !j.at("temperature").is_number()) {
    throw BadRequest("field 'temperature' must be a number");
  }
  read_field(j, "temperature", r.temperature);
  read_count(j, "top_k", r.top_k);
  read_count(j, "beam_width", r.beam_width);
  read_count(j, "num_results", r.num_results);
  read_count(j, "max_new_tokens", r.max_new_tokens);
  if (j.contains("seed") && !j.at("seed").is_null()) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0)) {
      throw BadRequest("field 'seed' must be a non-negative integer");
    }
    r.seed = s.get<std::uint64_t>();
  }
  return r;
}

json to_json(const CompletionRequest& r) {
  return {{"prompt", r.prompt},           {"mode", to_string(r.mode)},
          {"temperature", r.temperature}, {"top_k", r.top_k},
          {"beam_width", r.beam_width},   {"num_results", r.num_results},
          {"max_new_tokens", r.max_new_tokens}, {"seed", r.seed}};
}

json to_json(const CompletionResult& r) {
  json j{{"text", r.text}, {"score", r.score}};
  if (r.premise_classes) {
    json classes = json::array();
    for (const auto& c : *r.premise_classes) {
      json e = class_json(c.premise_class);
      e["line"] = c.line;
      classes.push_back(std::move(e));
    }
    j["premise_classes"] = std::move(classes);
  }
  return j;
}

ServiceResources load_resources(const std::string& checkpoint_path, const std::string& library_path,
                                const std::string& signature_path) {
  ServiceResources r{lm::load_checkpoint(checkpoint_path), std::nullopt, std::nullopt};
  if (!library_path.empty()) r.library = load_library(library_path);
  if (!signature_path.empty()) r.signature = prefix::load_signature(signature_path);
  return r;
}

CompletionService::CompletionService(std::size_t max_concurrent)
    : max_concurrent_(std::max<std::size_t>(1, max_concurrent)),
      started_(std::chrono::steady_clock::now()) {}

void CompletionService::load(ServiceResources resources) {
  if (!resources.model.model) throw Error("no model to serve");
  auto shared = std::make_shared<const ServiceResources>(std::move(resources));
  std::lock_guard lock(mutex_);
  resources_ = std::move(shared);
}

bool CompletionService::ready() const { return resources() != nullptr; }

std::shared_ptr<const ServiceResources> CompletionService::resources() const {
  std::lock_guard lock(mutex_);
  return resources_;
}

std::vector<CompletionResult> CompletionService::complete(const CompletionRequest& request) const {
  const auto res = resources();
  if (!res) throw ServiceUnavailable("model is loading");
  if (request.num_results == 0) throw BadRequest("num_results must be at least 1");
  if (request.beam_width == 0) throw BadRequest("beam_width must be at least 1");
  if (!std::isfinite(request.temperature) || request.temperature < 0) {
    throw BadRequest("temperature must be a finite non-negative number");
  }

  {
    std::unique_lock lock(mutex_);
    slot_free_.wait(lock, [&] { return active_ < max_concurrent_; });
    ++active_;
  }
  struct Release {
    const CompletionService* s;
    ~Release() {
      {
        std::lock_guard lock(s->mutex_);
        --s->active_;
      }
      s->slot_free_.notify_one();
    }
  } release{this};
  return complete_loaded(*res, request);
}

std::vector<CompletionResult> CompletionService::complete_loaded(
    const ServiceResources& res, const CompletionRequest& request) const {
  const lm::Vocabulary& vocab = res.model.vocab;
  const lm::LanguageModel& model = *res.model.model;
  const bool premises = request.mode == CompletionMode::PremisePrediction;

  if (premises) {
    if (!res.library || !res.signature) {
      throw BadRequest("premise_prediction needs a library and a signature");
    }
    if (split_lines(request.prompt).size() != 1 || request.prompt.find('\n') != std::string::npos) {
      throw BadRequest("premise_prediction prompt must be a single prefix-token line");
    }
    const auto decoded = eval::decode_line(request.prompt, *res.signature);
    if (const auto* f = std::get_if<eval::DecodeFailure>(&decoded)) {
      throw BadRequest("prompt does not decode: " + f->message);
    }
  }

  const auto tokens = lm::tokenize_document(request.prompt, vocab.kind());
  const std::size_t ctx = model.context_length();
  if (tokens.size() + kPromptReserve > ctx) {
    throw BadRequest("prompt has " + std::to_string(tokens.size()) + " tokens; the limit is " +
                     std::to_string(ctx > kPromptReserve ? ctx - kPromptReserve : 0));
  }
  std::vector<int> prompt{lm::BOS};
  for (int id : vocab.encode(tokens)) prompt.push_back(id);
  if (premises) prompt.push_back(lm::NEWLINE);

  lm::DecodeParams p;
  p.temperature = request.temperature;
  p.top_k = request.top_k;
  p.max_new_tokens = request.max_new_tokens;
  p.length_penalty = 1.0;
  p.seed = request.seed;
  p.suppressed_tokens = {lm::PAD, lm::BOS, lm::UNK};
  p.stop_tokens = premises ? std::vector<int>{lm::EOS} : std::vector<int>{lm::EOS, lm::NEWLINE};

  struct Raw {
    std::vector<int> tokens;
    double score;
  };
  std::vector<Raw> raw;
  const bool sampling = request.beam_width == 1 && request.temperature > lm::kGreedyTemperature;
  if (sampling) {
    p.mode = lm::DecodeMode::Sample;
    // Draws stop after num_results distinct texts or a fixed attempt budget.
    std::set<std::vector<int>> seen;
    for (std::size_t i = 0; i < 4 * request.num_results && seen.size() < request.num_results; ++i) {
      p.seed = request.seed + i;
      auto cont = lm::sample(model, prompt, p);
      if (!seen.insert(cont).second) continue;
      const double lp = lm::continuation_log_prob(model, prompt, cont, p.temperature, p.suppressed_tokens);
      raw.push_back({cont, lm::length_normalized(lp, cont.size(), p.length_penalty)});
    }
  } else {
    p.mode = lm::DecodeMode::Beam;
    p.beam_width = std::max(request.beam_width, request.num_results);
    for (auto& h : lm::beam_search(model, prompt, p)) raw.push_back({std::move(h.tokens), h.score});
  }

  std::vector<CompletionResult> out;
  std::set<std::string> texts;
  for (auto& r : raw) {
    std::vector<int> body = r.tokens;
    if (!body.empty() && std::find(p.stop_tokens.begin(), p.stop_tokens.end(), body.back()) !=
                             p.stop_tokens.end()) {
      body.pop_back();
    }
    CompletionResult result;
    result.text = vocab.decode(body);
    result.score = r.score;
    if (!texts.insert(result.text).second) continue;
    if (premises) {
      std::vector<ClassifiedLine> classes;
      for (auto& line : split_lines(result.text)) {
        auto c = eval::classify_premise(eval::decode_line(line, *res.signature), *res.library);
        classes.push_back({std::move(line), std::move(c)});
      }
      result.premise_classes = std::move(classes);
    }
    out.push_back(std::move(result));
  }
  std::stable_sort(out.begin(), out.end(), [](const CompletionResult& a, const CompletionResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.text < b.text;
  });
  if (out.size() > request.num_results) out.resize(request.num_results);
  return out;
}

json CompletionService::health() const {
  const auto res = resources();
  const double uptime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  if (!res) return {{"status", "loading"}, {"uptime_seconds", uptime}};
  return {{"status", "ok"},
          {"checkpoint_id", res->model.id},
          {"vocab_size", res->model.vocab.size()},
          {"context_length", res->model.model->context_length()},
          {"library_size", res->library ? res->library->size() : 0},
          {"uptime_seconds", uptime}};
}

}  // namespace neuconj::service
