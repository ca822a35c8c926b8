#include "graspkit/tensor.hpp"

#include <cmath>

#include "graspkit/errors.hpp"

namespace graspkit {

std::size_t element_count(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

TensorF::TensorF(std::vector<std::size_t> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (element_count(shape_) != data_.size()) {
    throw Error(ErrorCode::kShapeMismatch, "tensor data does not match its shape");
  }
  for (float v : data_)
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "tensor values must be finite");
}

TensorF TensorF::zeros(std::vector<std::size_t> shape) {
  const std::size_t n = element_count(shape);
  return TensorF(std::move(shape), std::vector<float>(n, 0.0f));
}

}  // namespace graspkit
