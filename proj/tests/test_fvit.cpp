#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "graspkit/errors.hpp"
#include "graspkit/fvit.hpp"
#include "oracles/attention.hpp"

using namespace graspkit;

namespace {

TensorF random_tensor(std::mt19937_64& g, std::vector<std::size_t> shape, double scale) {
  std::uniform_real_distribution<float> u(static_cast<float>(-scale), static_cast<float>(scale));
  std::vector<float> data(element_count(shape));
  for (float& v : data) v = u(g);
  return TensorF(std::move(shape), std::move(data));
}

HeadWeights random_attention(std::mt19937_64& g, const HiLoConfig& cfg) {
  const std::size_t hd = cfg.head_dim(), c = cfg.dim;
  const std::size_t hi = cfg.high_heads() * hd, lo = cfg.low_heads() * hd;
  const double s = 1.0 / std::sqrt(static_cast<double>(c));
  HeadWeights w;
  w.hi_q = random_tensor(g, {hi, c}, s);
  w.hi_k = random_tensor(g, {hi, c}, s);
  w.hi_v = random_tensor(g, {hi, c}, s);
  w.lo_q = random_tensor(g, {lo, c}, s);
  w.lo_k = random_tensor(g, {lo, c}, s);
  w.lo_v = random_tensor(g, {lo, c}, s);
  w.attn_out = random_tensor(g, {c, c}, s);
  return w;
}

oracle::Mat tokens_of(const TensorF& x) {
  const std::size_t n = x.dim(0) * x.dim(1), c = x.dim(2);
  oracle::Mat m(n, std::vector<double>(c));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < c; ++k) m[t][k] = x.ptr()[t * c + k];
  return m;
}

double max_abs_diff(const TensorF& y, const oracle::Mat& ref) {
  const std::size_t c = y.dim(2);
  double worst = 0.0;
  for (std::size_t t = 0; t < ref.size(); ++t)
    for (std::size_t k = 0; k < c; ++k) worst = std::max(worst, std::abs(y.ptr()[t * c + k] - ref[t][k]));
  return worst;
}

oracle::HiLoOracleWeights oracle_weights(const HeadWeights& w) {
  return {w.hi_q.ptr(), w.hi_k.ptr(), w.hi_v.ptr(), w.lo_q.ptr(), w.lo_k.ptr(), w.lo_v.ptr(), w.attn_out.ptr()};
}

// Token permutation on an (H, W, C) map: out[perm[t]] = x[t].
TensorF permute_tokens(const TensorF& x, const std::vector<std::size_t>& perm) {
  const std::size_t c = x.dim(2);
  std::vector<float> d(x.size());
  for (std::size_t t = 0; t < perm.size(); ++t) std::copy_n(x.ptr() + t * c, c, d.data() + perm[t] * c);
  return TensorF(x.shape(), d);
}

// Token index of (row, col) after swapping window blocks according to `wperm`.
std::vector<std::size_t> window_permutation(std::size_t h, std::size_t w, std::size_t s,
                                            const std::vector<std::size_t>& wperm) {
  const std::size_t gw = w / s;
  std::vector<std::size_t> perm(h * w);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t win = (r / s) * gw + c / s;
      const std::size_t to = wperm[win];
      perm[r * w + c] = ((to / gw) * s + r % s) * w + (to % gw) * s + c % s;
    }
  return perm;
}

std::vector<double> matmul_oracle(const TensorF& feat, const HeadWeights& w) {
  auto layer = [](const std::vector<double>& x, const TensorF& wt, const TensorF& b, bool act) {
    const std::size_t rows = wt.dim(0), cols = wt.dim(1);
    std::vector<double> y(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = b.ptr()[r];
      for (std::size_t k = 0; k < cols; ++k) acc += static_cast<double>(wt.ptr()[r * cols + k]) * x[k];
      y[r] = act && acc < 0 ? 0.1 * acc : acc;
    }
    return y;
  };
  std::vector<double> x(feat.data().begin(), feat.data().end());
  x = layer(x, w.fc1_weight, w.fc1_bias, true);
  x = layer(x, w.fc2_weight, w.fc2_bias, true);
  return layer(x, w.fc3_weight, w.fc3_bias, false);
}

}  // namespace

TEST_SUITE("fvit") {
  TEST_CASE("head split") {
    HiLoConfig cfg{64, 4, 0.5, 2};
    CHECK(cfg.low_heads() == 2);
    cfg.alpha = 0.6;
    CHECK(cfg.low_heads() == 2);
    cfg.alpha = 1.0;
    CHECK(cfg.high_heads() == 0);
    cfg.alpha = 0.0;
    CHECK(cfg.low_heads() == 0);
    CHECK_THROWS_AS((HiLoConfig{63, 4, 0.5, 2}.validate()), Error);
    CHECK_THROWS_AS((HiLoConfig{64, 4, 1.5, 2}.validate()), Error);
    CHECK_THROWS_AS((HiLoConfig{64, 4, 0.5, 0}.validate()), Error);
  }

  TEST_CASE("dense equivalence when one window covers the map") {
    const HiLoConfig cfg{64, 4, 0.0, 4};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      std::mt19937_64 g(seed);
      const HeadWeights w = random_attention(g, cfg);
      const TensorF x = random_tensor(g, {4, 4, 64}, 1.0);
      const TensorF y = hilo_forward(x, cfg, w);
      const auto ref = oracle::dense_mhsa(tokens_of(x), 64, 4, w.hi_q.ptr(), w.hi_k.ptr(), w.hi_v.ptr(), w.attn_out.ptr());
      CHECK(max_abs_diff(y, ref) < 1e-5);
    }
  }

  TEST_CASE("windowed and pooled heads match the brute-force oracle") {
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const HiLoConfig cfg{64, 4, alpha, 2};
      std::mt19937_64 g(17);
      const HeadWeights w = random_attention(g, cfg);
      const TensorF x = random_tensor(g, {4, 6, 64}, 1.0);
      const TensorF y = hilo_forward(x, cfg, w);
      CHECK(y.shape() == x.shape());
      const auto ref = oracle::hilo(tokens_of(x), 4, 6, 64, 4, cfg.low_heads(), 2, oracle_weights(w));
      CHECK(max_abs_diff(y, ref) < 1e-5);
    }
  }

  TEST_CASE("single token") {
    const HiLoConfig cfg{16, 4, 0.5, 1};
    std::mt19937_64 g(3);
    const HeadWeights w = random_attention(g, cfg);
    const TensorF x = random_tensor(g, {1, 1, 16}, 1.0);
    const TensorF y = hilo_forward(x, cfg, w);
    // One logit per softmax: each branch returns its value projection.
    const auto xt = tokens_of(x);
    const auto hv = oracle::project(xt, w.hi_v.ptr(), 8, 16);
    const auto lv = oracle::project(xt, w.lo_v.ptr(), 8, 16);
    oracle::Mat cat(1, std::vector<double>(16));
    for (std::size_t k = 0; k < 8; ++k) {
      cat[0][k] = hv[0][k];
      cat[0][8 + k] = lv[0][k];
    }
    CHECK(max_abs_diff(y, oracle::project(cat, w.attn_out.ptr(), 16, 16)) < 1e-6);
  }

  TEST_CASE("attention rows are distributions") {
    const HiLoConfig cfg{32, 4, 0.5, 2};
    std::mt19937_64 g(5);
    const HeadWeights w = random_attention(g, cfg);
    const TensorF x = random_tensor(g, {4, 4, 32}, 3.0);
    AttentionTrace trace;
    hilo_forward(x, cfg, w, &trace);
    CHECK(trace.hi_rows.size() == 2 * 16);
    CHECK(trace.lo_rows.size() == 2 * 16);
    for (const auto* rows : {&trace.hi_rows, &trace.lo_rows})
      for (const auto& row : *rows) {
        CHECK(row.size() == 4);
        double sum = 0.0;
        for (float p : row) {
          CHECK(p >= 0.0f);
          sum += p;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-6);
      }
  }

  TEST_CASE("window permutation equivariance is exact") {
    const HiLoConfig cfg{32, 4, 0.0, 2};
    std::mt19937_64 g(6);
    const HeadWeights w = random_attention(g, cfg);
    const TensorF x = random_tensor(g, {4, 6, 32}, 1.0);
    std::vector<std::size_t> wperm{0, 1, 2, 3, 4, 5};
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(wperm.begin(), wperm.end(), g);
      const auto perm = window_permutation(4, 6, 2, wperm);
      const TensorF y = hilo_forward(x, cfg, w);
      const TensorF yp = hilo_forward(permute_tokens(x, perm), cfg, w);
      CHECK(yp == permute_tokens(y, perm));
    }
  }

  TEST_CASE("pooled heads ignore token order inside windows") {
    const HiLoConfig cfg{32, 4, 1.0, 2};
    std::mt19937_64 g(7);
    const HeadWeights w = random_attention(g, cfg);
    const TensorF x = random_tensor(g, {4, 4, 32}, 1.0);
    const TensorF y = hilo_forward(x, cfg, w);
    for (int trial = 0; trial < 10; ++trial) {
      // Shuffle tokens inside each 2x2 window.
      std::vector<std::size_t> perm(16);
      for (std::size_t win = 0; win < 4; ++win) {
        std::vector<std::size_t> ids;
        for (std::size_t d = 0; d < 4; ++d) ids.push_back(((win / 2) * 2 + d / 2) * 4 + (win % 2) * 2 + d % 2);
        std::vector<std::size_t> to = ids;
        std::shuffle(to.begin(), to.end(), g);
        for (std::size_t d = 0; d < 4; ++d) perm[ids[d]] = to[d];
      }
      const TensorF yp = hilo_forward(permute_tokens(x, perm), cfg, w);
      const TensorF expect = permute_tokens(y, perm);
      double worst = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, double(std::abs(yp.ptr()[i] - expect.ptr()[i])));
      CHECK(worst < 1e-6);
    }
  }

  TEST_CASE("hilo shape errors") {
    const HiLoConfig cfg{32, 4, 0.5, 3};
    std::mt19937_64 g(8);
    const HeadWeights w = random_attention(g, cfg);
    CHECK_THROWS_WITH_AS(hilo_forward(TensorF::zeros({4, 4, 32}), cfg, w), doctest::Contains("WindowIndivisible"), Error);
    const HiLoConfig two{32, 4, 0.5, 2};
    CHECK_THROWS_WITH_AS(hilo_forward(TensorF::zeros({4, 4, 16}), two, w), doctest::Contains("ShapeMismatch"), Error);
    CHECK_THROWS_WITH_AS(hilo_forward(TensorF::zeros({4, 4, 32}), HiLoConfig{32, 4, 0.25, 2}, w),
                         doctest::Contains("hi.q"), Error);
  }

  TEST_CASE("leaky relu") {
    std::mt19937_64 g(9);
    std::uniform_real_distribution<float> u(-100.0f, 100.0f);
    for (int i = 0; i < 10000; ++i) {
      const float v = u(g);
      CHECK(leaky_relu(v) == (v >= 0 ? v : 0.1f * v));
    }
    CHECK(leaky_relu(0.0f) == 0.0f);
    CHECK(leaky_relu(-10.0f) == 0.1f * -10.0f);
  }

  TEST_CASE("regression head") {
    const HiLoConfig cfg{64, 4, 0.5, 2};
    std::mt19937_64 g(10);
    const TensorF feat = random_tensor(g, {768}, 1.0);

    SUBCASE("zero weights give zeros") {
      const TensorF y = regression_forward(feat, make_zero_weights(cfg, 5), 5);
      CHECK(y.shape() == std::vector<std::size_t>{5});
      for (float v : y.data()) CHECK(v == 0.0f);
    }
    SUBCASE("bias passthrough") {
      HeadWeights w = make_random_weights(4, cfg, 8);
      std::fill(w.fc3_weight.data().begin(), w.fc3_weight.data().end(), 0.0f);
      for (std::size_t i = 0; i < 8; ++i) w.fc3_bias.ptr()[i] = 0.25f * static_cast<float>(i) - 1.0f;
      const TensorF y = regression_forward(feat, w, 8);
      for (std::size_t i = 0; i < 8; ++i) CHECK(y.ptr()[i] == w.fc3_bias.ptr()[i]);
    }
    SUBCASE("matches a direct matmul") {
      for (std::size_t out : {5u, 8u}) {
        const HeadWeights w = make_random_weights(11, cfg, out);
        const TensorF y = regression_forward(feat, w, out);
        const auto ref = matmul_oracle(feat, w);
        const auto lib_ref = regression_forward_reference(feat, w);
        REQUIRE(ref.size() == out);
        for (std::size_t i = 0; i < out; ++i) {
          CHECK(std::abs(y.ptr()[i] - ref[i]) < 1e-5);
          CHECK(std::abs(lib_ref[i] - ref[i]) < 1e-9);
        }
      }
    }
    SUBCASE("final bias shifts the output") {
      HeadWeights w = make_random_weights(12, cfg, 5);
      const TensorF y0 = regression_forward(feat, w, 5);
      const float delta = 0.5f;
      for (float& b : w.fc3_bias.data()) b += delta;
      const TensorF y1 = regression_forward(feat, w, 5);
      for (std::size_t i = 0; i < 5; ++i) {
        // Float addition rounds once per side.
        const float mag = std::max({std::abs(y0.ptr()[i]), std::abs(y1.ptr()[i]), 1.0f});
        const float tol = 4.0f * std::numeric_limits<float>::epsilon() * mag;
        CHECK(std::abs((y1.ptr()[i] - y0.ptr()[i]) - delta) <= tol);
      }
    }
    SUBCASE("shape errors") {
      const HeadWeights w = make_zero_weights(cfg, 5);
      CHECK_THROWS_WITH_AS(regression_forward(TensorF::zeros({767}), w, 5), doctest::Contains("ShapeMismatch"), Error);
      CHECK_THROWS_WITH_AS(regression_forward(feat, w, 8), doctest::Contains("ShapeMismatch"), Error);
      HeadWeights bad = w;
      bad.fc1_weight = TensorF::zeros({2048, 767});
      CHECK_THROWS_WITH_AS(regression_forward(feat, bad, 5), doctest::Contains("fc1.weight"), Error);
      bad = w;
      bad.fc3_weight = TensorF::zeros({6, 1024});
      bad.fc3_bias = TensorF::zeros({6});
      CHECK_THROWS_AS(regression_forward(feat, bad, 6), Error);
    }
  }

  TEST_CASE("random weights are deterministic and bounded") {
    const HiLoConfig cfg{64, 4, 0.5, 2};
    const HeadWeights a = make_random_weights(1, cfg, 5), b = make_random_weights(1, cfg, 5);
    const HeadWeights c = make_random_weights(2, cfg, 5);
    CHECK(a.fc2_weight == b.fc2_weight);
    CHECK(a.hi_q == b.hi_q);
    CHECK_FALSE(a.fc2_weight == c.fc2_weight);
    const double bound = 1.0 / std::sqrt(768.0);
    for (float v : a.fc1_weight.data()) REQUIRE(std::abs(v) <= bound);
    validate_attention_shapes(a, cfg);
    validate_regression_shapes(a);
  }
}
