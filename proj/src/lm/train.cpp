#include "neuconj/lm/train.hpp"

#include <cmath>
#include <random>

namespace neuconj::lm {

template <class T>
T global_norm(std::span<const T> grad) {
  T sum = 0;
  for (T g : grad) sum += g * g;
  return std::sqrt(sum);
}

template <class T>
std::vector<LossPoint> train(Transformer<T>& model, std::span<const int> corpus,
                             const TrainConfig& cfg,
                             const std::function<void(const LossPoint&)>& on_step) {
  cfg.validate();
  const std::size_t ctx = model.config().context_length;
  if (corpus.size() <= ctx) {
    throw Error("corpus of " + std::to_string(corpus.size()) +
                " tokens is not longer than the context length " + std::to_string(ctx));
  }
  std::vector<LossPoint> trace;
  if (cfg.steps == 0) return trace;

  auto params = model.parameters();
  const std::size_t n = params.size();
  std::vector<T> grad(n), m(n, T(0)), v(n, T(0));
  std::mt19937_64 rng(cfg.seed);
  const std::size_t starts = corpus.size() - ctx;  // window [s, s + ctx] must fit
  const T inv_batch = T(1) / static_cast<T>(cfg.batch_size);
  const T b1 = static_cast<T>(cfg.beta1);
  const T b2 = static_cast<T>(cfg.beta2);
  double b1_pow = 1, b2_pow = 1;

  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    std::fill(grad.begin(), grad.end(), T(0));
    double loss = 0;
    for (std::size_t b = 0; b < cfg.batch_size; ++b) {
      const std::size_t s = static_cast<std::size_t>(rng() % starts);
      loss += static_cast<double>(
          model.loss_and_grad(corpus.subspan(s, ctx), corpus.subspan(s + 1, ctx), grad, inv_batch));
    }
    loss /= static_cast<double>(cfg.batch_size);
    if (!std::isfinite(loss)) throw DivergedLoss(step);

    const T norm = global_norm<T>(grad);
    if (!std::isfinite(static_cast<double>(norm))) throw DivergedLoss(step);
    const T clip = static_cast<T>(cfg.grad_clip_norm);
    if (norm > clip) {
      const T f = clip / norm;
      for (auto& g : grad) g *= f;
    }

    b1_pow *= cfg.beta1;
    b2_pow *= cfg.beta2;
    const T lr_t = static_cast<T>(cfg.learning_rate * std::sqrt(1 - b2_pow) / (1 - b1_pow));
    const T eps = static_cast<T>(cfg.adam_eps);
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = b1 * m[i] + (T(1) - b1) * grad[i];
      v[i] = b2 * v[i] + (T(1) - b2) * grad[i] * grad[i];
      params[i] -= lr_t * m[i] / (std::sqrt(v[i]) + eps);
    }

    trace.push_back({step, loss});
    if (on_step) on_step(trace.back());
  }
  return trace;
}

template <class T>
double evaluate_loss(const Transformer<T>& model, std::span<const int> corpus) {
  const std::size_t ctx = model.config().context_length;
  if (corpus.size() < 2) throw Error("evaluation corpus needs at least two tokens");
  double total = 0;
  std::size_t count = 0;
  for (std::size_t s = 0; s + 1 < corpus.size(); s += ctx) {
    const std::size_t len = std::min(ctx, corpus.size() - 1 - s);
    total += static_cast<double>(model.loss(corpus.subspan(s, len), corpus.subspan(s + 1, len))) *
             static_cast<double>(len);
    count += len;
  }
  return total / static_cast<double>(count);
}

template std::vector<LossPoint> train(Transformer<float>&, std::span<const int>,
                                      const TrainConfig&,
                                      const std::function<void(const LossPoint&)>&);
template std::vector<LossPoint> train(Transformer<double>&, std::span<const int>,
                                      const TrainConfig&,
                                      const std::function<void(const LossPoint&)>&);
template double evaluate_loss(const Transformer<float>&, std::span<const int>);
template double evaluate_loss(const Transformer<double>&, std::span<const int>);
template float global_norm(std::span<const float>);
template double global_norm(std::span<const double>);

}  // namespace neuconj::lm
