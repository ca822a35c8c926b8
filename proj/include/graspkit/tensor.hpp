#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graspkit {

/// Row-major single-precision tensor.
class TensorF {
 public:
  TensorF() = default;
  /// Throws ShapeMismatch when the element count disagrees with the shape and
  /// InvalidArgument for non-finite values.
  TensorF(std::vector<std::size_t> shape, std::vector<float> data);
  static TensorF zeros(std::vector<std::size_t> shape);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const { return data_.size(); }
  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }
  const float* ptr() const { return data_.data(); }
  float* ptr() { return data_.data(); }

  friend bool operator==(const TensorF&, const TensorF&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<float> data_;
};

std::size_t element_count(std::span<const std::size_t> shape);

}  // namespace graspkit
