#include "neuconj/lm/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace neuconj::lm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool contains(std::span<const int> ids, int id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// Feeds the prompt and returns the state plus the logits after it.
std::pair<std::unique_ptr<DecoderState>, std::vector<double>> prime(
    const LanguageModel& model, std::span<const int> prompt) {
  if (prompt.empty()) throw Error("decoding needs a non-empty prompt");
  if (prompt.size() >= model.context_length()) {
    throw SequenceTooLong(prompt.size() + 1, model.context_length());
  }
  auto state = model.start();
  std::vector<double> logits;
  for (int t : prompt) logits = state->feed(t);
  return {std::move(state), std::move(logits)};
}

std::size_t budget(const LanguageModel& model, std::size_t prompt_len, const DecodeParams& p) {
  return std::min(p.max_new_tokens, model.context_length() - prompt_len);
}

int argmax(std::span<const double> logits, std::span<const int> suppressed) {
  int best = -1;
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (contains(suppressed, static_cast<int>(v))) continue;
    if (best < 0 || logits[v] > logits[static_cast<std::size_t>(best)]) best = static_cast<int>(v);
  }
  if (best < 0) throw Error("every token is suppressed");
  return best;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int draw(std::span<const double> logits, const DecodeParams& p, std::mt19937_64& rng) {
  if (p.temperature < kGreedyTemperature || p.top_k == 1) return argmax(logits, p.suppressed_tokens);
  std::vector<int> order;
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (!contains(p.suppressed_tokens, static_cast<int>(v))) order.push_back(static_cast<int>(v));
  }
  if (order.empty()) throw Error("every token is suppressed");
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return logits[static_cast<std::size_t>(a)] > logits[static_cast<std::size_t>(b)];
  });
  if (p.top_k != kUnlimited && p.top_k < order.size()) order.resize(p.top_k);
  const double mx = logits[static_cast<std::size_t>(order.front())];
  std::vector<double> w(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    w[i] = std::exp((logits[static_cast<std::size_t>(order[i])] - mx) / p.temperature);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (u < w[i]) return order[i];
    u -= w[i];
  }
  return order.back();
}

template <class Pick>
std::vector<int> run(const LanguageModel& model, std::span<const int> prompt,
                     const DecodeParams& p, Pick pick) {
  p.validate();
  auto [state, logits] = prime(model, prompt);
  const std::size_t limit = budget(model, prompt.size(), p);
  std::vector<int> out;
  while (out.size() < limit) {
    const int t = pick(logits);
    out.push_back(t);
    if (contains(p.stop_tokens, t) || out.size() == limit) break;
    logits = state->feed(t);
  }
  return out;
}

}  // namespace

std::vector<double> log_probabilities(std::span<const double> logits, double temperature,
                                      std::span<const int> suppressed) {
  std::vector<double> out(logits.size(), kNegInf);
  double mx = kNegInf;
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (!contains(suppressed, static_cast<int>(v))) mx = std::max(mx, logits[v] / temperature);
  }
  if (mx == kNegInf) return out;
  double sum = 0;
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (!contains(suppressed, static_cast<int>(v))) sum += std::exp(logits[v] / temperature - mx);
  }
  const double lse = mx + std::log(sum);
  for (std::size_t v = 0; v < logits.size(); ++v) {
    if (!contains(suppressed, static_cast<int>(v))) out[v] = logits[v] / temperature - lse;
  }
  return out;
}

std::vector<int> greedy(const LanguageModel& model, std::span<const int> prompt,
                        const DecodeParams& p) {
  return run(model, prompt, p,
             [&](const std::vector<double>& logits) { return argmax(logits, p.suppressed_tokens); });
}

std::vector<int> sample(const LanguageModel& model, std::span<const int> prompt,
                        const DecodeParams& p) {
  std::mt19937_64 rng(p.seed);
  return run(model, prompt, p,
             [&](const std::vector<double>& logits) { return draw(logits, p, rng); });
}

namespace {

struct Beam {
  std::unique_ptr<DecoderState> state;
  std::vector<double> logprobs;  // next-token distribution
  Hypothesis hyp;
};

}  // namespace

double length_normalized(double log_prob, std::size_t length, double penalty) {
  if (penalty == 0 || length == 0) return log_prob;
  return log_prob / std::pow(static_cast<double>(length), penalty);
}

double continuation_log_prob(const LanguageModel& model, std::span<const int> prompt,
                             std::span<const int> continuation, double temperature,
                             std::span<const int> suppressed) {
  if (prompt.size() + continuation.size() > model.context_length()) {
    throw SequenceTooLong(prompt.size() + continuation.size(), model.context_length());
  }
  auto [state, logits] = prime(model, prompt);
  const double t = temperature < kGreedyTemperature ? 1.0 : temperature;
  double total = 0;
  for (std::size_t i = 0; i < continuation.size(); ++i) {
    const int tok = continuation[i];
    if (tok < 0 || static_cast<std::size_t>(tok) >= logits.size()) throw Error("token id out of range");
    total += log_probabilities(logits, t, suppressed)[static_cast<std::size_t>(tok)];
    if (i + 1 < continuation.size()) logits = state->feed(tok);
  }
  return total;
}

std::vector<Hypothesis> beam_search(const LanguageModel& model, std::span<const int> prompt,
                                    const DecodeParams& p) {
  p.validate();
  auto [state, logits] = prime(model, prompt);
  const std::size_t limit = budget(model, prompt.size(), p);
  const double temperature = p.temperature < kGreedyTemperature ? 1.0 : p.temperature;

  std::vector<Beam> live;
  live.push_back({std::move(state), log_probabilities(logits, temperature, p.suppressed_tokens), {}});
  std::vector<Hypothesis> done;

  for (std::size_t step = 0; step < limit && !live.empty(); ++step) {
    struct Candidate {
      double log_prob;
      std::size_t parent;
      int token;
    };
    std::vector<Candidate> cands;
    for (std::size_t b = 0; b < live.size(); ++b) {
      for (std::size_t v = 0; v < live[b].logprobs.size(); ++v) {
        const double lp = live[b].logprobs[v];
        if (lp == kNegInf) continue;
        cands.push_back({live[b].hyp.log_prob + lp, b, static_cast<int>(v)});
      }
    }
    const std::size_t keep = std::min(p.beam_width, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                      [](const Candidate& a, const Candidate& b) {
                        if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
                        if (a.parent != b.parent) return a.parent < b.parent;
                        return a.token < b.token;
                      });
    std::vector<Beam> next;
    for (std::size_t i = 0; i < keep; ++i) {
      const Candidate& c = cands[i];
      Hypothesis h = live[c.parent].hyp;
      h.tokens.push_back(c.token);
      h.log_prob = c.log_prob;
      if (contains(p.stop_tokens, c.token)) {
        h.finished = true;
        done.push_back(std::move(h));
        continue;
      }
      if (step + 1 == limit) {
        done.push_back(std::move(h));
        continue;
      }
      auto s = live[c.parent].state->clone();
      auto lp = log_probabilities(s->feed(c.token), temperature, p.suppressed_tokens);
      next.push_back({std::move(s), std::move(lp), std::move(h)});
    }
    live = std::move(next);
  }
  for (auto& b : live) done.push_back(std::move(b.hyp));

  for (auto& h : done) h.score = length_normalized(h.log_prob, h.tokens.size(), p.length_penalty);
  std::stable_sort(done.begin(), done.end(), [](const Hypothesis& a, const Hypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.tokens < b.tokens;
  });
  if (done.size() > p.beam_width) done.resize(p.beam_width);
  return done;
}

}  // namespace neuconj::lm
