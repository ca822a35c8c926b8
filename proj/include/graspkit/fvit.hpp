#pragma once

// Inference-only pieces of the grasp network: a HiLo attention block and the
// fully connected regression head.
//
// HiLo splits the heads of one attention layer in two groups. High-frequency
// heads run softmax self-attention inside non-overlapping s x s windows.
// Low-frequency heads let every token attend to the s x s average-pooled map.
// The two outputs are concatenated (Hi channels first) and projected.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "graspkit/tensor.hpp"

namespace graspkit {

struct HiLoConfig {
  std::size_t dim = 64;      ///< channels C
  std::size_t n_heads = 4;   ///< total heads
  double alpha = 0.5;        ///< fraction of low-frequency heads
  std::size_t window = 2;    ///< window side s, in tokens

  std::size_t head_dim() const { return dim / n_heads; }
  /// floor(alpha * n_heads)
  std::size_t low_heads() const;
  std::size_t high_heads() const { return n_heads - low_heads(); }
  void validate() const;
};

/// Projection matrices are (out, in) row-major; y = W x.
struct HeadWeights {
  TensorF hi_q, hi_k, hi_v;  ///< (Hh*hd, C)
  TensorF lo_q, lo_k, lo_v;  ///< (Lh*hd, C); K and V act on pooled tokens
  TensorF attn_out;          ///< (C, C)
  TensorF fc1_weight, fc1_bias;  ///< (2048, 768), (2048)
  TensorF fc2_weight, fc2_bias;  ///< (1024, 2048), (1024)
  TensorF fc3_weight, fc3_bias;  ///< (5|8, 1024), (5|8)
};

inline constexpr std::size_t kFeatureDim = 768;
inline constexpr std::size_t kHidden1 = 2048;
inline constexpr std::size_t kHidden2 = 1024;

/// Canonical tensor names, in container order.
const std::vector<std::string>& weight_names();
TensorF& weight_by_name(HeadWeights& w, const std::string& name);
const TensorF& weight_by_name(const HeadWeights& w, const std::string& name);

/// Shapes of the attention tensors against the config; throws ShapeMismatch(name).
void validate_attention_shapes(const HeadWeights& w, const HiLoConfig& cfg);
/// Regression-head shapes; FC3 may produce 5 or 8 outputs. Throws ShapeMismatch(name).
void validate_regression_shapes(const HeadWeights& w);

/// Softmax rows recorded during a forward pass (for checks only).
struct AttentionTrace {
  std::vector<std::vector<float>> hi_rows;
  std::vector<std::vector<float>> lo_rows;
};

/// x is (H, W, C). Throws ShapeMismatch or WindowIndivisible.
TensorF hilo_forward(const TensorF& x, const HiLoConfig& cfg, const HeadWeights& w, AttentionTrace* trace = nullptr);

inline float leaky_relu(float v) { return v >= 0.0f ? v : 0.1f * v; }

/// FC1 -> leaky ReLU(0.1) -> FC2 -> leaky ReLU(0.1) -> FC3. Dropout is the
/// identity at inference. Throws ShapeMismatch when the feature is not 768
/// long or FC3 does not produce out_dim values.
TensorF regression_forward(const TensorF& feature, const HeadWeights& w, std::size_t out_dim);

/// Straight triple-loop version of regression_forward accumulated in double;
/// used by `infer --check-oracle`.
std::vector<double> regression_forward_reference(const TensorF& feature, const HeadWeights& w);

/// Deterministic pseudo-random weights: element e of tensor t is
/// (2u - 1) / sqrt(fan_in) with u from the counter hash of (seed, t, e).
HeadWeights make_random_weights(std::uint64_t seed, const HiLoConfig& cfg, std::size_t out_dim);
HeadWeights make_zero_weights(const HiLoConfig& cfg, std::size_t out_dim);

}  // namespace graspkit
