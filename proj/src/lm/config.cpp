#include "neuconj/lm/config.hpp"

#include <cmath>
#include <json.hpp>

namespace neuconj::lm {

using nlohmann::json;

void ModelConfig::validate() const {
  if (layers == 0 || heads == 0 || model_dim == 0 || ff_dim == 0 || vocab_size == 0) {
    throw InvalidConfig("model counts must be positive");
  }
  if (model_dim % heads != 0) throw InvalidConfig("model_dim must be divisible by heads");
  if (context_length < 2) throw InvalidConfig("context_length must be at least 2");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw InvalidConfig("learning_rate must be positive");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1)) {
    throw InvalidConfig("adam betas must lie in [0, 1)");
  }
  if (!(grad_clip_norm > 0)) throw InvalidConfig("grad_clip_norm must be positive");
  if (batch_size == 0) throw InvalidConfig("batch_size must be positive");
}

void DecodeParams::validate() const {
  if (beam_width == 0) throw InvalidConfig("beam_width must be at least 1");
  if (!std::isfinite(temperature) || temperature < 0) {
    throw InvalidConfig("temperature must be finite and non-negative");
  }
  if (!std::isfinite(length_penalty) || length_penalty < 0) {
    throw InvalidConfig("length_penalty must be finite and non-negative");
  }
}

namespace {

template <class T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

ModelConfig model_from(const json& j) {
  ModelConfig c;
  read(j, "layers", c.layers);
  read(j, "heads", c.heads);
  read(j, "model_dim", c.model_dim);
  read(j, "ff_dim", c.ff_dim);
  read(j, "context_length", c.context_length);
  read(j, "vocab_size", c.vocab_size);
  read(j, "seed", c.seed);
  return c;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    RunConfig rc;
    if (j.contains("model")) rc.model = model_from(j.at("model"));
    if (j.contains("train")) {
      const json& t = j.at("train");
      read(t, "learning_rate", rc.train.learning_rate);
      read(t, "beta1", rc.train.beta1);
      read(t, "beta2", rc.train.beta2);
      read(t, "adam_eps", rc.train.adam_eps);
      read(t, "batch_size", rc.train.batch_size);
      read(t, "steps", rc.train.steps);
      read(t, "grad_clip_norm", rc.train.grad_clip_norm);
      read(t, "seed", rc.train.seed);
    }
    rc.train.validate();
    return rc;
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("malformed config: ") + e.what());
  }
}

std::string to_json(const ModelConfig& c) {
  return json{{"layers", c.layers},
              {"heads", c.heads},
              {"model_dim", c.model_dim},
              {"ff_dim", c.ff_dim},
              {"context_length", c.context_length},
              {"vocab_size", c.vocab_size},
              {"seed", c.seed}}
      .dump();
}

ModelConfig model_config_from_json(const std::string& json_text) {
  try {
    return model_from(json::parse(json_text));
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("malformed model config: ") + e.what());
  }
}

}  // namespace neuconj::lm
