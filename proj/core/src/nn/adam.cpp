#include "rmi/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace rmi::nn {

void Adam::step(const std::vector<ParamView>& params, double lr) {
  if (!(lr > 0.0)) throw std::invalid_argument("Adam: learning rate must be positive");
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.value.size(), 0.0);
      v_.emplace_back(p.value.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw std::invalid_argument("Adam: parameter layout changed");
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t b = 0; b < params.size(); ++b) {
    const auto& p = params[b];
    auto& m = m_[b];
    auto& v = v_[b];
    if (m.size() != p.value.size() || p.grad.size() != p.value.size())
      throw std::invalid_argument("Adam: parameter block size mismatch");
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double g = p.grad[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p.value[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

}  // namespace rmi::nn
