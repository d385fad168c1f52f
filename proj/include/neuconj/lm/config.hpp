#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "neuconj/error.hpp"

namespace neuconj::lm {

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

struct ModelConfig {
  std::size_t layers = 4;
  std::size_t heads = 4;
  std::size_t model_dim = 128;
  std::size_t ff_dim = 512;
  std::size_t context_length = 256;
  std::size_t vocab_size = 0;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidConfig
  bool operator==(const ModelConfig&) const = default;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 8;
  std::size_t steps = 1000;
  double grad_clip_norm = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class DecodeMode { Sample, Beam };

inline constexpr std::size_t kUnlimited = 0;

struct DecodeParams {
  DecodeMode mode = DecodeMode::Sample;
  double temperature = 1.0;
  std::size_t top_k = kUnlimited;
  std::size_t beam_width = 1;
  std::size_t max_new_tokens = 128;
  double length_penalty = 0.0;
  std::uint64_t seed = 0;
  // Generation ends after emitting one of these (it is kept in the output).
  std::vector<int> stop_tokens;
  // Never generated.
  std::vector<int> suppressed_tokens;

  void validate() const;
};

// Both halves of a training config file:
//   {"model": {"layers": 2, ...}, "train": {"learning_rate": 0.003, ...}}
// Missing keys keep their defaults; vocab_size is filled in from the corpus.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
};

RunConfig parse_run_config(const std::string& json_text);
std::string to_json(const ModelConfig& c);
ModelConfig model_config_from_json(const std::string& json_text);

}  // namespace neuconj::lm
