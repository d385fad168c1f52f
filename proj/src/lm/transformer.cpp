#include "neuconj/lm/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "neuconj/lm/kernels.hpp"

namespace neuconj::lm {

namespace {

constexpr double kLayerNormEps = 1e-5;

template <class T>
T dotp(const T* a, const T* b, std::size_t n) {
  return kernels::dot<T>({a, n}, {b, n});
}

template <class T>
void axpyp(T alpha, const T* x, T* y, std::size_t n) {
  kernels::axpy<T>(alpha, {x, n}, {y, n});
}

template <class T>
void layernorm_row(const T* x, const T* g, const T* b, T* y, std::size_t n, T& mean, T& rstd) {
  T m = 0;
  for (std::size_t i = 0; i < n; ++i) m += x[i];
  m /= static_cast<T>(n);
  T v = 0;
  for (std::size_t i = 0; i < n; ++i) v += (x[i] - m) * (x[i] - m);
  v /= static_cast<T>(n);
  mean = m;
  rstd = T(1) / std::sqrt(v + static_cast<T>(kLayerNormEps));
  for (std::size_t i = 0; i < n; ++i) y[i] = (x[i] - m) * rstd * g[i] + b[i];
}

// dx += d(layernorm)/dx . dy; dg, db accumulate.
template <class T>
void layernorm_back_row(const T* x, const T* g, T mean, T rstd, const T* dy, T* dx, T* dg, T* db,
                        std::size_t n) {
  T sum_dxhat = 0;
  T sum_dxhat_xhat = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const T xhat = (x[i] - mean) * rstd;
    const T dxhat = dy[i] * g[i];
    sum_dxhat += dxhat;
    sum_dxhat_xhat += dxhat * xhat;
    dg[i] += dy[i] * xhat;
    db[i] += dy[i];
  }
  const T inv_n = T(1) / static_cast<T>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const T xhat = (x[i] - mean) * rstd;
    const T dxhat = dy[i] * g[i];
    dx[i] += rstd * (dxhat - sum_dxhat * inv_n - xhat * sum_dxhat_xhat * inv_n);
  }
}

// y = W x + b with W stored out x in.
template <class T>
void linear_row(const T* w, const T* b, const T* x, T* y, std::size_t out, std::size_t in) {
  for (std::size_t o = 0; o < out; ++o) y[o] = b[o] + dotp(w + o * in, x, in);
}

template <class T>
void linear_back_row(const T* w, const T* x, const T* dy, std::size_t out, std::size_t in, T* dw,
                     T* db, T* dx) {
  for (std::size_t o = 0; o < out; ++o) {
    const T g = dy[o];
    if (g == T(0)) continue;
    db[o] += g;
    axpyp(g, x, dw + o * in, in);
    axpyp(g, w + o * in, dx, in);
  }
}

template <class T>
constexpr T kGeluC = static_cast<T>(0.7978845608028653558798921198687637L);  // sqrt(2/pi)
template <class T>
constexpr T kGeluA = static_cast<T>(0.044715L);

template <class T>
T gelu(T x) {
  return T(0.5) * x * (T(1) + std::tanh(kGeluC<T> * (x + kGeluA<T> * x * x * x)));
}

template <class T>
T gelu_grad(T x) {
  const T th = std::tanh(kGeluC<T> * (x + kGeluA<T> * x * x * x));
  return T(0.5) * (T(1) + th) +
         T(0.5) * x * (T(1) - th * th) * kGeluC<T> * (T(1) + T(3) * kGeluA<T> * x * x);
}

// Causal attention output for position t. qkv holds rows 0..t with stride
// 3d (q | k | v); head h's probabilities go to probs + h * head_stride.
template <class T>
void attention_row(const T* qkv, std::size_t t, std::size_t d, std::size_t heads, T* probs,
                   std::size_t head_stride, T* out) {
  const std::size_t hd = d / heads;
  const std::size_t stride = 3 * d;
  const T scale = T(1) / std::sqrt(static_cast<T>(hd));
  std::fill(out, out + d, T(0));
  for (std::size_t h = 0; h < heads; ++h) {
    const T* q = qkv + t * stride + h * hd;
    T* p = probs + h * head_stride;
    T mx = -std::numeric_limits<T>::infinity();
    for (std::size_t s = 0; s <= t; ++s) {
      p[s] = dotp(q, qkv + s * stride + d + h * hd, hd) * scale;
      mx = std::max(mx, p[s]);
    }
    T sum = 0;
    for (std::size_t s = 0; s <= t; ++s) {
      p[s] = std::exp(p[s] - mx);
      sum += p[s];
    }
    for (std::size_t s = 0; s <= t; ++s) p[s] /= sum;
    for (std::size_t s = 0; s <= t; ++s) axpyp(p[s], qkv + s * stride + 2 * d + h * hd, out + h * hd, hd);
  }
}

// Where one block writes its per-position intermediates.
template <class T>
struct RowOut {
  T* ln1;
  T* mean1;
  T* rstd1;
  T* att;
  T* mid;
  T* ln2;
  T* mean2;
  T* rstd2;
  T* fc;
  T* act;
  T* tmp;  // model_dim scratch
};

}  // namespace

template <class T>
struct Transformer<T>::Cache {
  struct LayerCache {
    std::vector<T> ln1, mean1, rstd1, qkv, probs, att, mid, ln2, mean2, rstd2, fc, act;
  };
  std::size_t n = 0;
  std::vector<std::vector<T>> x;  // residual stream entering each layer, plus the output
  std::vector<LayerCache> layers;
  std::vector<T> lnf, meanf, rstdf, logits, tmp;
};

namespace {

template <class T, class Layer>
void block_row(const T* p, const Layer& L, const ModelConfig& cfg, std::size_t t, const T* x_in,
               T* qkv_rows, T* probs, std::size_t head_stride, const RowOut<T>& r, T* x_out) {
  const std::size_t d = cfg.model_dim;
  const std::size_t ff = cfg.ff_dim;
  layernorm_row(x_in, p + L.ln1_g, p + L.ln1_b, r.ln1, d, *r.mean1, *r.rstd1);
  linear_row(p + L.w_qkv, p + L.b_qkv, r.ln1, qkv_rows + t * 3 * d, 3 * d, d);
  attention_row(qkv_rows, t, d, cfg.heads, probs, head_stride, r.att);
  linear_row(p + L.w_o, p + L.b_o, r.att, r.tmp, d, d);
  for (std::size_t i = 0; i < d; ++i) r.mid[i] = x_in[i] + r.tmp[i];
  layernorm_row(r.mid, p + L.ln2_g, p + L.ln2_b, r.ln2, d, *r.mean2, *r.rstd2);
  linear_row(p + L.w_fc, p + L.b_fc, r.ln2, r.fc, ff, d);
  for (std::size_t i = 0; i < ff; ++i) r.act[i] = gelu(r.fc[i]);
  linear_row(p + L.w_proj, p + L.b_proj, r.act, r.tmp, d, ff);
  for (std::size_t i = 0; i < d; ++i) x_out[i] = r.mid[i] + r.tmp[i];
}

}  // namespace

template <class T>
class Transformer<T>::State final : public DecoderState {
 public:
  explicit State(const Transformer& m) : m_(&m) {
    const auto& c = m.config_;
    qkv_.assign(c.layers, std::vector<T>(c.context_length * 3 * c.model_dim));
    probs_.resize(c.heads * c.context_length);
    row_.resize(9 * c.model_dim + 2 * c.ff_dim + 8);
  }

  std::vector<double> feed(int token) override {
    const auto& c = m_->config_;
    if (pos_ >= c.context_length) throw SequenceTooLong(pos_ + 1, c.context_length);
    if (token < 0 || static_cast<std::size_t>(token) >= c.vocab_size) {
      throw Error("token id " + std::to_string(token) + " outside the vocabulary");
    }
    const std::size_t d = c.model_dim;
    const std::size_t ff = c.ff_dim;
    const T* p = m_->params_.data();
    T* base = row_.data();
    T* x = base;
    T* y = base + d;
    RowOut<T> r{base + 2 * d, base + 9 * d + 2 * ff,     base + 9 * d + 2 * ff + 1,
                base + 3 * d, base + 4 * d,              base + 5 * d,
                base + 9 * d + 2 * ff + 2, base + 9 * d + 2 * ff + 3, base + 6 * d,
                base + 6 * d + ff, base + 6 * d + 2 * ff};
    const T* e = p + m_->tok_emb_ + static_cast<std::size_t>(token) * d;
    const T* pe = p + m_->pos_emb_ + pos_ * d;
    for (std::size_t i = 0; i < d; ++i) x[i] = e[i] + pe[i];
    for (std::size_t l = 0; l < c.layers; ++l) {
      block_row(p, m_->layers_[l], c, pos_, x, qkv_[l].data(), probs_.data(), c.context_length, r, y);
      std::swap(x, y);
    }
    T* lnf = y;
    T mean, rstd;
    layernorm_row(x, p + m_->lnf_g_, p + m_->lnf_b_, lnf, d, mean, rstd);
    std::vector<double> logits(c.vocab_size);
    for (std::size_t v = 0; v < c.vocab_size; ++v) {
      logits[v] = static_cast<double>(dotp(p + m_->tok_emb_ + v * d, lnf, d));
    }
    ++pos_;
    return logits;
  }

  std::size_t length() const override { return pos_; }
  std::unique_ptr<DecoderState> clone() const override { return std::make_unique<State>(*this); }

 private:
  const Transformer* m_;
  std::size_t pos_ = 0;
  std::vector<std::vector<T>> qkv_;
  std::vector<T> probs_;
  std::vector<T> row_;
};

template <class T>
void Transformer<T>::layout() {
  const std::size_t d = config_.model_dim;
  const std::size_t ff = config_.ff_dim;
  std::size_t offset = 0;
  auto add = [&](std::string name, std::vector<std::size_t> shape) {
    std::size_t size = 1;
    for (auto s : shape) size *= s;
    tensors_.push_back({std::move(name), std::move(shape), offset, size});
    offset += size;
    return tensors_.back().offset;
  };
  tok_emb_ = add("tok_emb", {config_.vocab_size, d});
  pos_emb_ = add("pos_emb", {config_.context_length, d});
  for (std::size_t l = 0; l < config_.layers; ++l) {
    const std::string h = "h" + std::to_string(l) + ".";
    Layer L{};
    L.ln1_g = add(h + "ln1.g", {d});
    L.ln1_b = add(h + "ln1.b", {d});
    L.w_qkv = add(h + "attn.w_qkv", {3 * d, d});
    L.b_qkv = add(h + "attn.b_qkv", {3 * d});
    L.w_o = add(h + "attn.w_o", {d, d});
    L.b_o = add(h + "attn.b_o", {d});
    L.ln2_g = add(h + "ln2.g", {d});
    L.ln2_b = add(h + "ln2.b", {d});
    L.w_fc = add(h + "mlp.w_fc", {ff, d});
    L.b_fc = add(h + "mlp.b_fc", {ff});
    L.w_proj = add(h + "mlp.w_proj", {d, ff});
    L.b_proj = add(h + "mlp.b_proj", {d});
    layers_.push_back(L);
  }
  lnf_g_ = add("ln_f.g", {d});
  lnf_b_ = add("ln_f.b", {d});
  params_.assign(offset, T(0));
}

template <class T>
Transformer<T>::Transformer(const ModelConfig& config, double init_std) : config_(config) {
  config_.validate();
  layout();
  std::mt19937_64 rng(config_.seed);
  std::normal_distribution<double> normal(0.0, init_std);
  for (const auto& t : tensors_) {
    const std::string_view leaf = std::string_view(t.name).substr(t.name.rfind('.') + 1);
    T* p = params_.data() + t.offset;
    if (leaf == "g") {
      std::fill(p, p + t.size, T(1));
    } else if (leaf == "b" || leaf.starts_with("b_")) {
      std::fill(p, p + t.size, T(0));
    } else {
      for (std::size_t i = 0; i < t.size; ++i) p[i] = static_cast<T>(normal(rng));
    }
  }
}

template <class T>
Transformer<T>::Transformer(const ModelConfig& config, std::vector<T> parameters)
    : config_(config) {
  config_.validate();
  layout();
  if (parameters.size() != params_.size()) {
    throw Error("expected " + std::to_string(params_.size()) + " parameters, got " +
                std::to_string(parameters.size()));
  }
  params_ = std::move(parameters);
}

template <class T>
std::span<T> Transformer<T>::tensor(std::string_view name) {
  for (const auto& t : tensors_) {
    if (t.name == name) return std::span<T>(params_).subspan(t.offset, t.size);
  }
  throw Error("no tensor named '" + std::string(name) + "'");
}

template <class T>
void Transformer<T>::check_ids(std::span<const int> ids) const {
  if (ids.empty()) throw Error("empty token sequence");
  if (ids.size() > config_.context_length) {
    throw SequenceTooLong(ids.size(), config_.context_length);
  }
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= config_.vocab_size) {
      throw Error("token id " + std::to_string(id) + " outside the vocabulary");
    }
  }
}

template <class T>
void Transformer<T>::run(std::span<const int> ids, Cache& c) const {
  check_ids(ids);
  const std::size_t n = ids.size();
  const std::size_t d = config_.model_dim;
  const std::size_t ff = config_.ff_dim;
  const std::size_t V = config_.vocab_size;
  const std::size_t H = config_.heads;
  const T* p = params_.data();

  c.n = n;
  c.x.assign(config_.layers + 1, std::vector<T>(n * d));
  c.layers.resize(config_.layers);
  c.tmp.assign(d, T(0));
  for (std::size_t t = 0; t < n; ++t) {
    const T* e = p + tok_emb_ + static_cast<std::size_t>(ids[t]) * d;
    const T* pe = p + pos_emb_ + t * d;
    for (std::size_t i = 0; i < d; ++i) c.x[0][t * d + i] = e[i] + pe[i];
  }
  for (std::size_t l = 0; l < config_.layers; ++l) {
    auto& lc = c.layers[l];
    for (auto* v : {&lc.ln1, &lc.att, &lc.mid, &lc.ln2}) v->assign(n * d, T(0));
    for (auto* v : {&lc.mean1, &lc.rstd1, &lc.mean2, &lc.rstd2}) v->assign(n, T(0));
    lc.qkv.assign(n * 3 * d, T(0));
    lc.probs.assign(H * n * n, T(0));
    lc.fc.assign(n * ff, T(0));
    lc.act.assign(n * ff, T(0));
    for (std::size_t t = 0; t < n; ++t) {
      RowOut<T> r{lc.ln1.data() + t * d, &lc.mean1[t],          &lc.rstd1[t],
                  lc.att.data() + t * d, lc.mid.data() + t * d, lc.ln2.data() + t * d,
                  &lc.mean2[t],          &lc.rstd2[t],          lc.fc.data() + t * ff,
                  lc.act.data() + t * ff, c.tmp.data()};
      block_row(p, layers_[l], config_, t, c.x[l].data() + t * d, lc.qkv.data(),
                lc.probs.data() + t * n, n * n, r, c.x[l + 1].data() + t * d);
    }
  }
  c.lnf.assign(n * d, T(0));
  c.meanf.assign(n, T(0));
  c.rstdf.assign(n, T(0));
  c.logits.assign(n * V, T(0));
  const std::vector<T>& xf = c.x[config_.layers];
  for (std::size_t t = 0; t < n; ++t) {
    layernorm_row(xf.data() + t * d, p + lnf_g_, p + lnf_b_, c.lnf.data() + t * d, d, c.meanf[t],
                  c.rstdf[t]);
    for (std::size_t v = 0; v < V; ++v) {
      c.logits[t * V + v] = dotp(p + tok_emb_ + v * d, c.lnf.data() + t * d, d);
    }
  }
}

template <class T>
std::vector<T> Transformer<T>::forward(std::span<const int> ids) const {
  Cache c;
  run(ids, c);
  return std::move(c.logits);
}

namespace {

// Mean cross-entropy over rows; optionally fills dlogits with
// scale * d(mean)/d(logits).
template <class T>
T cross_entropy(const std::vector<T>& logits, std::span<const int> targets, std::size_t V,
                std::vector<T>* dlogits, T scale) {
  const std::size_t n = targets.size();
  if (dlogits) dlogits->assign(n * V, T(0));
  T total = 0;
  const T inv_n = scale / static_cast<T>(n);
  for (std::size_t t = 0; t < n; ++t) {
    const int target = targets[t];
    if (target < 0 || static_cast<std::size_t>(target) >= V) {
      throw Error("target id " + std::to_string(target) + " outside the vocabulary");
    }
    const T* row = logits.data() + t * V;
    const T mx = *std::max_element(row, row + V);
    T sum = 0;
    for (std::size_t v = 0; v < V; ++v) sum += std::exp(row[v] - mx);
    const T lse = mx + std::log(sum);
    total += lse - row[target];
    if (dlogits) {
      T* g = dlogits->data() + t * V;
      for (std::size_t v = 0; v < V; ++v) g[v] = std::exp(row[v] - lse) * inv_n;
      g[target] -= inv_n;
    }
  }
  return total / static_cast<T>(n);
}

}  // namespace

template <class T>
T Transformer<T>::loss(std::span<const int> ids, std::span<const int> targets) const {
  if (targets.size() != ids.size()) throw Error("ids and targets differ in length");
  Cache c;
  run(ids, c);
  return cross_entropy<T>(c.logits, targets, config_.vocab_size, nullptr, T(1));
}

template <class T>
T Transformer<T>::loss_and_grad(std::span<const int> ids, std::span<const int> targets,
                                std::span<T> grad, T grad_scale) const {
  if (targets.size() != ids.size()) throw Error("ids and targets differ in length");
  if (grad.size() != params_.size()) throw Error("gradient buffer has the wrong size");
  Cache c;
  run(ids, c);
  std::vector<T> dlogits;
  const T value = cross_entropy<T>(c.logits, targets, config_.vocab_size, &dlogits, grad_scale);
  backward(ids, c, dlogits, grad);
  return value;
}

template <class T>
void Transformer<T>::backward(std::span<const int> ids, const Cache& c, std::vector<T>& dlogits,
                              std::span<T> grad) const {
  const std::size_t n = c.n;
  const std::size_t d = config_.model_dim;
  const std::size_t ff = config_.ff_dim;
  const std::size_t V = config_.vocab_size;
  const std::size_t H = config_.heads;
  const std::size_t hd = d / H;
  const T scale = T(1) / std::sqrt(static_cast<T>(hd));
  const T* p = params_.data();
  T* g = grad.data();

  std::vector<T> dlnf(n * d, T(0));
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t v = 0; v < V; ++v) {
      const T gv = dlogits[t * V + v];
      axpyp(gv, p + tok_emb_ + v * d, dlnf.data() + t * d, d);
      axpyp(gv, c.lnf.data() + t * d, g + tok_emb_ + v * d, d);
    }
  }
  std::vector<T> dx(n * d, T(0));
  const std::vector<T>& xf = c.x[config_.layers];
  for (std::size_t t = 0; t < n; ++t) {
    layernorm_back_row(xf.data() + t * d, p + lnf_g_, c.meanf[t], c.rstdf[t], dlnf.data() + t * d,
                       dx.data() + t * d, g + lnf_g_, g + lnf_b_, d);
  }

  std::vector<T> dmid, dact, dln, datt, dqkv, dp(n);
  for (std::size_t l = config_.layers; l-- > 0;) {
    const auto& lc = c.layers[l];
    const Layer& L = layers_[l];

    dmid = dx;
    dact.assign(n * ff, T(0));
    for (std::size_t t = 0; t < n; ++t) {
      linear_back_row(p + L.w_proj, lc.act.data() + t * ff, dx.data() + t * d, d, ff,
                      g + L.w_proj, g + L.b_proj, dact.data() + t * ff);
    }
    for (std::size_t i = 0; i < n * ff; ++i) dact[i] *= gelu_grad(lc.fc[i]);
    dln.assign(n * d, T(0));
    for (std::size_t t = 0; t < n; ++t) {
      linear_back_row(p + L.w_fc, lc.ln2.data() + t * d, dact.data() + t * ff, ff, d, g + L.w_fc,
                      g + L.b_fc, dln.data() + t * d);
      layernorm_back_row(lc.mid.data() + t * d, p + L.ln2_g, lc.mean2[t], lc.rstd2[t],
                         dln.data() + t * d, dmid.data() + t * d, g + L.ln2_g, g + L.ln2_b, d);
    }

    dx = dmid;
    datt.assign(n * d, T(0));
    for (std::size_t t = 0; t < n; ++t) {
      linear_back_row(p + L.w_o, lc.att.data() + t * d, dmid.data() + t * d, d, d, g + L.w_o,
                      g + L.b_o, datt.data() + t * d);
    }
    dqkv.assign(n * 3 * d, T(0));
    const T* qkv = lc.qkv.data();
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t h = 0; h < H; ++h) {
        const T* prob = lc.probs.data() + (h * n + t) * n;
        const T* dout = datt.data() + t * d + h * hd;
        const T* q = qkv + t * 3 * d + h * hd;
        T sum = 0;
        for (std::size_t s = 0; s <= t; ++s) {
          dp[s] = dotp(dout, qkv + s * 3 * d + 2 * d + h * hd, hd);
          axpyp(prob[s], dout, dqkv.data() + s * 3 * d + 2 * d + h * hd, hd);
          sum += prob[s] * dp[s];
        }
        for (std::size_t s = 0; s <= t; ++s) {
          const T ds = prob[s] * (dp[s] - sum) * scale;
          axpyp(ds, qkv + s * 3 * d + d + h * hd, dqkv.data() + t * 3 * d + h * hd, hd);
          axpyp(ds, q, dqkv.data() + s * 3 * d + d + h * hd, hd);
        }
      }
    }
    dln.assign(n * d, T(0));
    for (std::size_t t = 0; t < n; ++t) {
      linear_back_row(p + L.w_qkv, lc.ln1.data() + t * d, dqkv.data() + t * 3 * d, 3 * d, d,
                      g + L.w_qkv, g + L.b_qkv, dln.data() + t * d);
      layernorm_back_row(c.x[l].data() + t * d, p + L.ln1_g, lc.mean1[t], lc.rstd1[t],
                         dln.data() + t * d, dx.data() + t * d, g + L.ln1_g, g + L.ln1_b, d);
    }
  }

  for (std::size_t t = 0; t < n; ++t) {
    axpyp(T(1), dx.data() + t * d, g + tok_emb_ + static_cast<std::size_t>(ids[t]) * d, d);
    axpyp(T(1), dx.data() + t * d, g + pos_emb_ + t * d, d);
  }
}

template <class T>
std::unique_ptr<DecoderState> Transformer<T>::start() const {
  return std::make_unique<State>(*this);
}

template class Transformer<float>;
template class Transformer<double>;
template class Transformer<long double>;

}  // namespace neuconj::lm
