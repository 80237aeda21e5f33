#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmi::nn {

/// Batch x channels x height x width. 1-D data uses height 1.
struct Shape {
  std::size_t n = 0;
  std::size_t c = 0;
  std::size_t h = 0;
  std::size_t w = 0;

  std::size_t numel() const noexcept { return n * c * h * w; }
  std::size_t plane() const noexcept { return h * w; }
  bool operator==(const Shape&) const = default;
};

/// Dense real tensor with a gradient buffer of the same shape.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t numel() const noexcept { return data_.size(); }

  double& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return data_[((n * shape_.c + c) * shape_.h + h) * shape_.w + w];
  }
  double at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
    return data_[((n * shape_.c + c) * shape_.h + h) * shape_.w + w];
  }

  std::span<double> plane(std::size_t n, std::size_t c) {
    return {data_.data() + (n * shape_.c + c) * shape_.plane(), shape_.plane()};
  }
  std::span<const double> plane(std::size_t n, std::size_t c) const {
    return {data_.data() + (n * shape_.c + c) * shape_.plane(), shape_.plane()};
  }
  /// All channels of batch entry n.
  std::span<double> sample(std::size_t n) {
    const std::size_t len = shape_.c * shape_.plane();
    return {data_.data() + n * len, len};
  }
  std::span<const double> sample(std::size_t n) const {
    const std::size_t len = shape_.c * shape_.plane();
    return {data_.data() + n * len, len};
  }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& grad() noexcept { return grad_; }
  const std::vector<double>& grad() const noexcept { return grad_; }

  void zero_grad();
  /// Throws std::runtime_error naming `where` if any value is NaN or Inf.
  void check_finite(const char* where) const;

  bool operator==(const Tensor& o) const { return shape_ == o.shape_ && data_ == o.data_; }

 private:
  Shape shape_;
  std::vector<double> data_;
  std::vector<double> grad_;
};

/// Stacks equally shaped single-sample tensors along the batch axis.
Tensor stack(std::span<const Tensor* const> samples);

/// Mutable view of one parameter block and its gradient accumulator.
struct ParamView {
  std::span<double> value;
  std::span<double> grad;
};

}  // namespace rmi::nn
