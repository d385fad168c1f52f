#pragma once

// Decoder-only transformer in the GPT-2 layout: learned token and position
// embeddings, pre-LayerNorm blocks of causal multi-head attention and a GELU
// MLP, a final LayerNorm, and an output projection tied to the token
// embedding. Forward and backward passes are hand-written over one flat
// parameter vector.
//
// T is float for training and inference; double and long double exist for
// gradient checking.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neuconj/lm/config.hpp"
#include "neuconj/lm/model.hpp"

namespace neuconj::lm {

struct TensorInfo {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
};

template <class T>
class Transformer final : public LanguageModel {
 public:
  // Weights drawn from normal(0, init_std) with config.seed; biases zero,
  // LayerNorm gains one.
  explicit Transformer(const ModelConfig& config, double init_std = 0.02);
  // Takes parameters in the order of tensors(); throws Error on size mismatch.
  Transformer(const ModelConfig& config, std::vector<T> parameters);

  const ModelConfig& config() const { return config_; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  std::span<T> parameters() { return params_; }
  std::span<const T> parameters() const { return params_; }
  std::span<T> tensor(std::string_view name);  // throws Error when unknown

  // Row-major ids.size() x vocab_size logits.
  std::vector<T> forward(std::span<const int> ids) const;

  // Mean next-token cross-entropy of targets[t] given ids[0..t].
  T loss(std::span<const int> ids, std::span<const int> targets) const;
  // As loss(), and adds grad_scale * d(loss)/d(parameters) into grad.
  T loss_and_grad(std::span<const int> ids, std::span<const int> targets, std::span<T> grad,
                  T grad_scale = T(1)) const;

  std::size_t vocab_size() const override { return config_.vocab_size; }
  std::size_t context_length() const override { return config_.context_length; }
  // The state keeps a pointer to this model, which must outlive it.
  std::unique_ptr<DecoderState> start() const override;

 private:
  struct Layer {
    std::size_t ln1_g, ln1_b, w_qkv, b_qkv, w_o, b_o, ln2_g, ln2_b, w_fc, b_fc, w_proj, b_proj;
  };
  struct Cache;
  class State;

  void layout();
  void check_ids(std::span<const int> ids) const;
  void run(std::span<const int> ids, Cache& c) const;
  void backward(std::span<const int> ids, const Cache& c, std::vector<T>& dlogits,
                std::span<T> grad) const;

  ModelConfig config_;
  std::vector<TensorInfo> tensors_;
  std::vector<T> params_;
  std::vector<Layer> layers_;
  std::size_t tok_emb_ = 0, pos_emb_ = 0, lnf_g_ = 0, lnf_b_ = 0;
};

extern template class Transformer<float>;
extern template class Transformer<double>;
extern template class Transformer<long double>;

}  // namespace neuconj::lm
