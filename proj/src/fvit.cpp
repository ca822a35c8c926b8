#include "graspkit/fvit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graspkit/errors.hpp"
#include "graspkit/rng.hpp"
#include "graspkit/simd.hpp"

namespace graspkit {
namespace {

void expect_shape(const TensorF& t, std::vector<std::size_t> shape, const std::string& name) {
  if (t.shape() != shape) {
    std::string want;
    for (std::size_t d : shape) want += (want.empty() ? "" : "x") + std::to_string(d);
    throw Error(ErrorCode::kShapeMismatch, name + " (expected " + want + ")");
  }
}

// y[n, out] = x[n, in] * W^T for a (out, in) weight.
std::vector<float> project_rows(const simd::Kernels& k, const float* x, std::size_t rows, std::size_t in,
                                const TensorF& w) {
  const std::size_t out = w.dim(0);
  std::vector<float> y(rows * out);
  if (out == 0) return y;
  for (std::size_t r = 0; r < rows; ++r) k.gemv_f32(w.ptr(), out, in, x + r * in, nullptr, y.data() + r * out);
  return y;
}

// Scaled dot-product attention for one head. q: nq rows, k/v: nk rows; each
// row has `stride` floats and the head occupies [offset, offset + hd).
// Result rows are written to out (stride out_stride, same offset).
void attend(const simd::Kernels& kern, const float* q, std::size_t nq, const float* k, const float* v,
            std::size_t nk, std::size_t stride, std::size_t offset, std::size_t hd, float scale, float* out,
            std::size_t out_stride, std::vector<std::vector<float>>* trace) {
  std::vector<float> p(nk);
  for (std::size_t i = 0; i < nq; ++i) {
    const float* qi = q + i * stride + offset;
    float mx = -std::numeric_limits<float>::infinity();
    for (std::size_t j = 0; j < nk; ++j) {
      p[j] = scale * kern.dot_f32(qi, k + j * stride + offset, hd);
      mx = std::max(mx, p[j]);
    }
    float sum = 0.0f;
    for (std::size_t j = 0; j < nk; ++j) {
      p[j] = std::exp(p[j] - mx);
      sum += p[j];
    }
    const float inv = 1.0f / sum;
    for (std::size_t j = 0; j < nk; ++j) p[j] *= inv;
    float* oi = out + i * out_stride + offset;
    std::fill(oi, oi + hd, 0.0f);
    for (std::size_t j = 0; j < nk; ++j) kern.axpy_f32(p[j], v + j * stride + offset, oi, hd);
    if (trace) trace->push_back(p);
  }
}

}  // namespace

std::size_t HiLoConfig::low_heads() const {
  return static_cast<std::size_t>(std::floor(alpha * static_cast<double>(n_heads)));
}

void HiLoConfig::validate() const {
  if (n_heads == 0 || dim == 0 || dim % n_heads != 0) {
    throw Error(ErrorCode::kShapeMismatch, "dim must be a positive multiple of n_heads");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  if (window == 0) throw Error(ErrorCode::kInvalidArgument, "window must be at least 1");
}

const std::vector<std::string>& weight_names() {
  static const std::vector<std::string> names{"hi.q",       "hi.k",     "hi.v",       "lo.q",     "lo.k",
                                              "lo.v",       "attn.out", "fc1.weight", "fc1.bias", "fc2.weight",
                                              "fc2.bias",   "fc3.weight", "fc3.bias"};
  return names;
}

TensorF& weight_by_name(HeadWeights& w, const std::string& name) {
  return const_cast<TensorF&>(weight_by_name(static_cast<const HeadWeights&>(w), name));
}

const TensorF& weight_by_name(const HeadWeights& w, const std::string& name) {
  if (name == "hi.q") return w.hi_q;
  if (name == "hi.k") return w.hi_k;
  if (name == "hi.v") return w.hi_v;
  if (name == "lo.q") return w.lo_q;
  if (name == "lo.k") return w.lo_k;
  if (name == "lo.v") return w.lo_v;
  if (name == "attn.out") return w.attn_out;
  if (name == "fc1.weight") return w.fc1_weight;
  if (name == "fc1.bias") return w.fc1_bias;
  if (name == "fc2.weight") return w.fc2_weight;
  if (name == "fc2.bias") return w.fc2_bias;
  if (name == "fc3.weight") return w.fc3_weight;
  if (name == "fc3.bias") return w.fc3_bias;
  throw Error(ErrorCode::kMissingTensor, name);
}

void validate_attention_shapes(const HeadWeights& w, const HiLoConfig& cfg) {
  cfg.validate();
  const std::size_t hi = cfg.high_heads() * cfg.head_dim();
  const std::size_t lo = cfg.low_heads() * cfg.head_dim();
  expect_shape(w.hi_q, {hi, cfg.dim}, "hi.q");
  expect_shape(w.hi_k, {hi, cfg.dim}, "hi.k");
  expect_shape(w.hi_v, {hi, cfg.dim}, "hi.v");
  expect_shape(w.lo_q, {lo, cfg.dim}, "lo.q");
  expect_shape(w.lo_k, {lo, cfg.dim}, "lo.k");
  expect_shape(w.lo_v, {lo, cfg.dim}, "lo.v");
  expect_shape(w.attn_out, {cfg.dim, cfg.dim}, "attn.out");
}

void validate_regression_shapes(const HeadWeights& w) {
  expect_shape(w.fc1_weight, {kHidden1, kFeatureDim}, "fc1.weight");
  expect_shape(w.fc1_bias, {kHidden1}, "fc1.bias");
  expect_shape(w.fc2_weight, {kHidden2, kHidden1}, "fc2.weight");
  expect_shape(w.fc2_bias, {kHidden2}, "fc2.bias");
  const std::size_t out = w.fc3_weight.rank() == 2 ? w.fc3_weight.dim(0) : 0;
  if (out != 5 && out != 8) throw Error(ErrorCode::kShapeMismatch, "fc3.weight (expected 5x1024 or 8x1024)");
  expect_shape(w.fc3_weight, {out, kHidden2}, "fc3.weight");
  expect_shape(w.fc3_bias, {out}, "fc3.bias");
}

TensorF hilo_forward(const TensorF& x, const HiLoConfig& cfg, const HeadWeights& w, AttentionTrace* trace) {
  validate_attention_shapes(w, cfg);
  if (x.rank() != 3 || x.dim(2) != cfg.dim) throw Error(ErrorCode::kShapeMismatch, "input must be (H, W, C)");
  const std::size_t height = x.dim(0), width = x.dim(1), c = cfg.dim, s = cfg.window;
  if (height % s != 0 || width % s != 0) {
    throw Error(ErrorCode::kWindowIndivisible, "H and W must be multiples of the window size");
  }
  const simd::Kernels& kern = simd::active();
  const std::size_t hd = cfg.head_dim();
  const std::size_t hi_ch = cfg.high_heads() * hd, lo_ch = cfg.low_heads() * hd;
  const float scale = 1.0f / std::sqrt(static_cast<float>(hd));
  const std::size_t tokens = height * width;
  const std::size_t win_tokens = s * s;
  const std::size_t gh = height / s, gw = width / s;

  std::vector<float> concat(tokens * c, 0.0f);

  if (hi_ch > 0) {
    std::vector<float> win(win_tokens * c);
    std::vector<float> win_out(win_tokens * hi_ch);
    for (std::size_t by = 0; by < gh; ++by)
      for (std::size_t bx = 0; bx < gw; ++bx) {
        for (std::size_t t = 0; t < win_tokens; ++t) {
          const std::size_t row = by * s + t / s, col = bx * s + t % s;
          std::copy_n(x.ptr() + (row * width + col) * c, c, win.data() + t * c);
        }
        const auto q = project_rows(kern, win.data(), win_tokens, c, w.hi_q);
        const auto k = project_rows(kern, win.data(), win_tokens, c, w.hi_k);
        const auto v = project_rows(kern, win.data(), win_tokens, c, w.hi_v);
        for (std::size_t h = 0; h < cfg.high_heads(); ++h) {
          attend(kern, q.data(), win_tokens, k.data(), v.data(), win_tokens, hi_ch, h * hd, hd, scale,
                 win_out.data(), hi_ch, trace ? &trace->hi_rows : nullptr);
        }
        for (std::size_t t = 0; t < win_tokens; ++t) {
          const std::size_t row = by * s + t / s, col = bx * s + t % s;
          std::copy_n(win_out.data() + t * hi_ch, hi_ch, concat.data() + (row * width + col) * c);
        }
      }
  }

  if (lo_ch > 0) {
    const std::size_t pooled_n = gh * gw;
    std::vector<float> pooled(pooled_n * c, 0.0f);
    const float inv = 1.0f / static_cast<float>(win_tokens);
    for (std::size_t by = 0; by < gh; ++by)
      for (std::size_t bx = 0; bx < gw; ++bx) {
        float* dst = pooled.data() + (by * gw + bx) * c;
        for (std::size_t t = 0; t < win_tokens; ++t) {
          const std::size_t row = by * s + t / s, col = bx * s + t % s;
          const float* src = x.ptr() + (row * width + col) * c;
          for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += src[ch];
        }
        for (std::size_t ch = 0; ch < c; ++ch) dst[ch] *= inv;
      }
    const auto q = project_rows(kern, x.ptr(), tokens, c, w.lo_q);
    const auto k = project_rows(kern, pooled.data(), pooled_n, c, w.lo_k);
    const auto v = project_rows(kern, pooled.data(), pooled_n, c, w.lo_v);
    std::vector<float> lo_out(tokens * lo_ch);
    for (std::size_t h = 0; h < cfg.low_heads(); ++h) {
      attend(kern, q.data(), tokens, k.data(), v.data(), pooled_n, lo_ch, h * hd, hd, scale, lo_out.data(),
             lo_ch, trace ? &trace->lo_rows : nullptr);
    }
    for (std::size_t t = 0; t < tokens; ++t) std::copy_n(lo_out.data() + t * lo_ch, lo_ch, concat.data() + t * c + hi_ch);
  }

  TensorF out = TensorF::zeros({height, width, c});
  for (std::size_t t = 0; t < tokens; ++t) {
    kern.gemv_f32(w.attn_out.ptr(), c, c, concat.data() + t * c, nullptr, out.ptr() + t * c);
  }
  return out;
}

TensorF regression_forward(const TensorF& feature, const HeadWeights& w, std::size_t out_dim) {
  validate_regression_shapes(w);
  if (feature.size() != kFeatureDim) throw Error(ErrorCode::kShapeMismatch, "feature must have 768 values");
  if (w.fc3_weight.dim(0) != out_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "fc3.weight produces " + std::to_string(w.fc3_weight.dim(0)) + " outputs, not " +
                    std::to_string(out_dim));
  }
  const simd::Kernels& k = simd::active();
  std::vector<float> h1(kHidden1), h2(kHidden2);
  k.gemv_f32(w.fc1_weight.ptr(), kHidden1, kFeatureDim, feature.ptr(), w.fc1_bias.ptr(), h1.data());
  for (float& v : h1) v = leaky_relu(v);
  k.gemv_f32(w.fc2_weight.ptr(), kHidden2, kHidden1, h1.data(), w.fc2_bias.ptr(), h2.data());
  for (float& v : h2) v = leaky_relu(v);
  std::vector<float> out(out_dim);
  k.gemv_f32(w.fc3_weight.ptr(), out_dim, kHidden2, h2.data(), w.fc3_bias.ptr(), out.data());
  return TensorF({out_dim}, std::move(out));
}

std::vector<double> regression_forward_reference(const TensorF& feature, const HeadWeights& w) {
  validate_regression_shapes(w);
  if (feature.size() != kFeatureDim) throw Error(ErrorCode::kShapeMismatch, "feature must have 768 values");
  const auto layer = [](const TensorF& weight, const TensorF& bias, const std::vector<double>& in, bool activate) {
    const std::size_t rows = weight.dim(0), cols = weight.dim(1);
    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = bias.data()[r];
      for (std::size_t c = 0; c < cols; ++c) acc += static_cast<double>(weight.data()[r * cols + c]) * in[c];
      out[r] = activate && acc < 0.0 ? 0.1 * acc : acc;
    }
    return out;
  };
  const std::vector<double> x(feature.data().begin(), feature.data().end());
  return layer(w.fc3_weight, w.fc3_bias, layer(w.fc2_weight, w.fc2_bias, layer(w.fc1_weight, w.fc1_bias, x, true), true),
               false);
}

namespace {

std::vector<std::pair<std::vector<std::size_t>, double>> weight_layout(const HiLoConfig& cfg, std::size_t out_dim) {
  cfg.validate();
  const std::size_t hi = cfg.high_heads() * cfg.head_dim(), lo = cfg.low_heads() * cfg.head_dim();
  const double c = static_cast<double>(cfg.dim);
  return {{{hi, cfg.dim}, c},
          {{hi, cfg.dim}, c},
          {{hi, cfg.dim}, c},
          {{lo, cfg.dim}, c},
          {{lo, cfg.dim}, c},
          {{lo, cfg.dim}, c},
          {{cfg.dim, cfg.dim}, c},
          {{kHidden1, kFeatureDim}, static_cast<double>(kFeatureDim)},
          {{kHidden1}, static_cast<double>(kFeatureDim)},
          {{kHidden2, kHidden1}, static_cast<double>(kHidden1)},
          {{kHidden2}, static_cast<double>(kHidden1)},
          {{out_dim, kHidden2}, static_cast<double>(kHidden2)},
          {{out_dim}, static_cast<double>(kHidden2)}};
}

}  // namespace

HeadWeights make_random_weights(std::uint64_t seed, const HiLoConfig& cfg, std::size_t out_dim) {
  HeadWeights w;
  const auto layout = weight_layout(cfg, out_dim);
  for (std::size_t t = 0; t < layout.size(); ++t) {
    const auto& [shape, fan_in] = layout[t];
    const double scale = 1.0 / std::sqrt(fan_in);
    std::vector<float> data(element_count(shape));
    for (std::size_t e = 0; e < data.size(); ++e) {
      const double u = static_cast<double>(counter_hash(seed, t, e) >> 40) * 0x1.0p-24;
      data[e] = static_cast<float>((2.0 * u - 1.0) * scale);
    }
    weight_by_name(w, weight_names()[t]) = TensorF(shape, std::move(data));
  }
  return w;
}

HeadWeights make_zero_weights(const HiLoConfig& cfg, std::size_t out_dim) {
  HeadWeights w;
  const auto layout = weight_layout(cfg, out_dim);
  for (std::size_t t = 0; t < layout.size(); ++t) weight_by_name(w, weight_names()[t]) = TensorF::zeros(layout[t].first);
  return w;
}

}  // namespace graspkit
