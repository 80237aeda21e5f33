#include "rmi/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rmi::nn {

Tensor::Tensor(Shape s, double fill) : shape_(s), data_(s.numel(), fill), grad_(s.numel(), 0.0) {}

void Tensor::zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

void Tensor::check_finite(const char* where) const {
  for (double v : data_)
    if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value after ") + where);
}

Tensor stack(std::span<const Tensor* const> samples) {
  if (samples.empty()) throw std::invalid_argument("stack: no samples");
  const Shape s0 = samples.front()->shape();
  if (s0.n != 1) throw std::invalid_argument("stack: expected single-sample tensors");
  Tensor out({samples.size(), s0.c, s0.h, s0.w});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i]->shape() == s0)) throw std::invalid_argument("stack: shape mismatch");
    std::copy(samples[i]->data().begin(), samples[i]->data().end(), out.sample(i).begin());
  }
  return out;
}

}  // namespace rmi::nn
