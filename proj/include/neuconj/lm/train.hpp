#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "neuconj/lm/config.hpp"
#include "neuconj/lm/transformer.hpp"

namespace neuconj::lm {

class DivergedLoss : public Error {
 public:
  explicit DivergedLoss(std::size_t step)
      : Error("loss became non-finite at step " + std::to_string(step)), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct LossPoint {
  std::size_t step;  // 1-based
  double loss;       // mean cross-entropy of the step's batch, before the update
};

// Adam with bias correction and global-norm gradient clipping. Each step
// averages the loss over batch_size windows of context_length + 1 tokens
// drawn uniformly from the corpus with the config seed. The corpus must be
// longer than the context. Same inputs and seed give a bit-identical trace.
template <class T>
std::vector<LossPoint> train(Transformer<T>& model, std::span<const int> corpus,
                             const TrainConfig& cfg,
                             const std::function<void(const LossPoint&)>& on_step = {});

// Mean next-token cross-entropy over consecutive non-overlapping windows
// covering the corpus.
template <class T>
double evaluate_loss(const Transformer<T>& model, std::span<const int> corpus);

// L2 norm of a gradient vector.
template <class T>
T global_norm(std::span<const T> grad);

}  // namespace neuconj::lm
