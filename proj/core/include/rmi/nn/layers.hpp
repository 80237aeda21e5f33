#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rmi/nn/tensor.hpp"

namespace rmi::nn {

struct ConvGrads {
  Tensor input;
  std::vector<double> weight;
  std::vector<double> bias;
};

/// Same-padded (zero) 2-D cross-correlation. Kernel extents must be odd.
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kh, std::size_t kw);

  std::size_t in_channels() const noexcept { return in_ch_; }
  std::size_t out_channels() const noexcept { return out_ch_; }
  std::size_t kernel_h() const noexcept { return kh_; }
  std::size_t kernel_w() const noexcept { return kw_; }
  std::size_t param_count() const noexcept { return weight.size() + bias.size(); }

  double& w(std::size_t o, std::size_t i, std::size_t y, std::size_t x) {
    return weight[((o * in_ch_ + i) * kh_ + y) * kw_ + x];
  }

  Tensor forward(const Tensor& x) const;
  ConvGrads backward(const Tensor& x, const Tensor& grad_out) const;

  std::vector<double> weight;  // [out][in][kh][kw]
  std::vector<double> bias;    // [out]
  std::vector<double> weight_grad;
  std::vector<double> bias_grad;

 private:
  std::size_t in_ch_ = 0;
  std::size_t out_ch_ = 0;
  std::size_t kh_ = 1;
  std::size_t kw_ = 1;
};

enum class Mode { Train, Eval };

/// Statistics captured by a training-mode forward pass.
struct BnCache {
  std::vector<double> mean;
  std::vector<double> inv_std;
  Tensor x_hat;
};

struct BnGrads {
  Tensor input;
  std::vector<double> gamma;
  std::vector<double> beta;
};

/// Per-channel batch normalization over batch and spatial axes.
class BatchNorm2d {
 public:
  BatchNorm2d() = default;
  explicit BatchNorm2d(std::size_t channels, double eps = 1e-5, double momentum = 0.1);

  std::size_t channels() const noexcept { return gamma.size(); }
  std::size_t param_count() const noexcept { return gamma.size() + beta.size(); }
  bool has_running_stats() const noexcept { return batches_tracked > 0; }

  /// Uses batch statistics and updates the running estimates.
  Tensor forward_train(const Tensor& x, BnCache& cache);
  /// Uses the running statistics; throws if never trained.
  Tensor forward_eval(const Tensor& x) const;
  BnGrads backward(const BnCache& cache, const Tensor& grad_out) const;

  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  std::vector<double> gamma_grad;
  std::vector<double> beta_grad;
  double eps = 1e-5;
  double momentum = 0.1;
  std::uint64_t batches_tracked = 0;
};

Tensor relu_forward(const Tensor& x);
/// Subgradient at 0 is 0.
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

}  // namespace rmi::nn
