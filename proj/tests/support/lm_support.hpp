#pragma once

// Test doubles and oracles for the language-model tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "neuconj/lm/model.hpp"
#include "neuconj/lm/transformer.hpp"

namespace neuconj::testing {

// Next-token distribution depends only on the previous token:
// probs[prev][next]. Logits are log-probabilities.
class BigramModel final : public lm::LanguageModel {
 public:
  explicit BigramModel(std::vector<std::vector<double>> probs, std::size_t context = 64)
      : probs_(std::move(probs)), context_(context) {}

  std::size_t vocab_size() const override { return probs_.size(); }
  std::size_t context_length() const override { return context_; }
  std::unique_ptr<lm::DecoderState> start() const override {
    return std::make_unique<State>(this);
  }

  double prob(int prev, int next) const {
    return probs_[static_cast<std::size_t>(prev)][static_cast<std::size_t>(next)];
  }

 private:
  class State final : public lm::DecoderState {
   public:
    explicit State(const BigramModel* m) : m_(m) {}
    std::vector<double> feed(int token) override {
      ++len_;
      std::vector<double> logits;
      for (double p : m_->probs_[static_cast<std::size_t>(token)]) logits.push_back(std::log(p));
      return logits;
    }
    std::size_t length() const override { return len_; }
    std::unique_ptr<lm::DecoderState> clone() const override {
      return std::make_unique<State>(*this);
    }

   private:
    const BigramModel* m_;
    std::size_t len_ = 0;
  };

  std::vector<std::vector<double>> probs_;
  std::size_t context_;
};

// Three states visited in a fixed cycle; state s emits one of two tokens
// first_id + 2s, first_id + 2s + 1 uniformly. Entropy rate ln 2, unigram
// entropy ln 6.
inline std::vector<int> three_state_corpus(std::size_t n, std::uint64_t seed, int first_id) {
  std::mt19937_64 rng(seed);
  std::vector<int> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int state = static_cast<int>(i % 3);
    out.push_back(first_id + 2 * state + static_cast<int>(rng() & 1));
  }
  return out;
}

// Entropy in nats of the empirical unigram distribution.
inline double unigram_entropy(const std::vector<int>& ids) {
  std::map<int, std::size_t> counts;
  for (int i : ids) ++counts[i];
  double h = 0;
  for (const auto& [id, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(ids.size());
    h -= p * std::log(p);
  }
  return h;
}

// The example premise-prediction model: from the prompt token 0, the first
// token follows row 0 and the second follows the row of the first.
inline BigramModel three_token_model() {
  return BigramModel({{0.5, 0.4, 0.1}, {0.9, 0.05, 0.05}, {0.2, 0.3, 0.5}});
}

inline std::vector<int> random_ids(std::size_t n, std::size_t vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> ids(n);
  for (auto& i : ids) i = static_cast<int>(rng() % vocab);
  return ids;
}

// Worst relative error per tensor between the analytic gradient and central
// differences, on a 2-layer, d=8, vocabulary 11 model in long double.
inline std::map<std::string, double> gradient_check_errors() {
  lm::ModelConfig c;
  c.layers = 2;
  c.heads = 2;
  c.model_dim = 8;
  c.ff_dim = 16;
  c.context_length = 6;
  c.vocab_size = 11;
  c.seed = 3;
  lm::Transformer<long double> m(c, 0.3);
  // Move LayerNorm gains and all biases off their init values.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> jitter(0.0, 0.2);
  for (auto& p : m.parameters()) p += static_cast<long double>(jitter(rng));

  const auto ids = random_ids(6, 11, 21);
  const auto targets = random_ids(6, 11, 22);
  std::vector<long double> grad(m.parameters().size(), 0.0L);
  m.loss_and_grad(ids, targets, grad);

  const long double h = 1e-5L;
  std::map<std::string, double> worst;
  for (const auto& t : m.tensors()) {
    double w = 0;
    for (std::size_t i = t.offset; i < t.offset + t.size; ++i) {
      long double& p = m.parameters()[i];
      const long double saved = p;
      p = saved + h;
      const long double up = m.loss(ids, targets);
      p = saved - h;
      const long double down = m.loss(ids, targets);
      p = saved;
      const long double numeric = (up - down) / (2 * h);
      // Key biases shift every score of a softmax row equally, so their true
      // gradient is zero; the floor keeps such entries from dividing noise by
      // noise.
      const long double denom =
          std::max({std::abs(numeric), std::abs(grad[i]), static_cast<long double>(1e-8)});
      w = std::max(w, static_cast<double>(std::abs(numeric - grad[i]) / denom));
    }
    worst[t.name] = w;
  }
  return worst;
}

}  // namespace neuconj::testing
