#pragma once

#include <span>
#include <vector>

#include "neuconj/lm/config.hpp"
#include "neuconj/lm/model.hpp"

namespace neuconj::lm {

// Temperatures below this are treated as argmax.
inline constexpr double kGreedyTemperature = 1e-6;

// Continuation of the prompt (prompt tokens excluded). Ends after a stop
// token, after max_new_tokens, or when the context is full. Ties in argmax go
// to the lowest token id. Throws SequenceTooLong when the prompt already
// fills the context, Error on an empty prompt.
std::vector<int> greedy(const LanguageModel& model, std::span<const int> prompt,
                        const DecodeParams& p);
std::vector<int> sample(const LanguageModel& model, std::span<const int> prompt,
                        const DecodeParams& p);

struct Hypothesis {
  std::vector<int> tokens;  // continuation only
  double log_prob = 0;      // sum of token log-probabilities
  double score = 0;         // log_prob / length^length_penalty
  bool finished = false;    // ended on a stop token
};

// Each step keeps the beam_width best (sum log-prob) extensions of the live
// hypotheses, ties going to the earlier parent and then the lower token id;
// extensions ending on a stop token retire as finished. Returns at most
// beam_width hypotheses by descending score. max_new_tokens = 0 yields the
// single empty hypothesis.
std::vector<Hypothesis> beam_search(const LanguageModel& model, std::span<const int> prompt,
                                    const DecodeParams& p);

// log-softmax of logits / temperature with suppressed ids at -inf.
std::vector<double> log_probabilities(std::span<const double> logits, double temperature,
                                      std::span<const int> suppressed = {});

// log_prob / length^penalty; an empty sequence keeps its log_prob.
double length_normalized(double log_prob, std::size_t length, double penalty);

// Sum of the token log-probabilities of continuation after prompt, under the
// same temperature and suppression rules as the decoders.
double continuation_log_prob(const LanguageModel& model, std::span<const int> prompt,
                             std::span<const int> continuation, double temperature,
                             std::span<const int> suppressed = {});

}  // namespace neuconj::lm
