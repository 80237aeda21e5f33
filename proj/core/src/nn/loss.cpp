#include "rmi/nn/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "rmi/numeric.hpp"

namespace rmi::nn {

LossResult loss_mse(const Tensor& pred, const Tensor& target) {
  if (!(pred.shape() == target.shape())) throw std::invalid_argument("loss_mse: shape mismatch");
  const std::size_t n = pred.numel();
  LossResult r;
  r.grad.resize(n);
  std::vector<double> sq(n);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred.data()[i] - target.data()[i];
    sq[i] = d * d;
    r.grad[i] = 2.0 * d * inv;
  }
  r.value = pairwise_sum(std::span<const double>(sq)) * inv;
  return r;
}

namespace {

void require_complex(const Tensor& t, std::size_t n_cells, const char* who) {
  if (t.shape().c != 2) throw std::invalid_argument(std::string(who) + ": requires two (re, im) channels");
  if (n_cells != t.shape().n) throw std::invalid_argument(std::string(who) + ": one cell set per batch entry");
}

}  // namespace

LossResult loss_sinr(const Tensor& pred, std::span<const SpatialCells> cells) {
  require_complex(pred, cells.size(), "loss_sinr");
  const Shape s = pred.shape();
  LossResult r;
  r.grad.assign(pred.numel(), 0.0);
  const double inv_batch = 1.0 / static_cast<double>(s.n);
  for (std::size_t b = 0; b < s.n; ++b) {
    const auto& cs = cells[b];
    if (cs.peaks.empty() || cs.noise.empty()) throw std::invalid_argument("loss_sinr: empty cell set");
    const auto re = pred.plane(b, 0), im = pred.plane(b, 1);
    auto power = [&](const std::pair<std::size_t, std::size_t>& c) {
      const std::size_t k = c.first * s.w + c.second;
      return re[k] * re[k] + im[k] * im[k];
    };
    std::vector<double> ps, pn;
    for (const auto& c : cs.peaks) ps.push_back(power(c));
    for (const auto& c : cs.noise) pn.push_back(power(c));
    const double n_o = static_cast<double>(ps.size()), n_n = static_cast<double>(pn.size());
    const double sig = pairwise_sum(std::span<const double>(ps)) / n_o;
    const double noise = pairwise_sum(std::span<const double>(pn)) / n_n;
    if (!(noise > 0.0)) throw std::invalid_argument("loss_sinr: zero noise power");
    r.value -= sig / noise * inv_batch;

    // d(-sig/noise)/dx = -(dsig/dx)/noise + sig/noise^2 * dnoise/dx
    const double gs = -inv_batch / noise / n_o;
    const double gn = inv_batch * sig / (noise * noise) / n_n;
    auto* gre = r.grad.data() + (b * 2 + 0) * s.plane();
    auto* gim = r.grad.data() + (b * 2 + 1) * s.plane();
    for (const auto& c : cs.peaks) {
      const std::size_t k = c.first * s.w + c.second;
      gre[k] += gs * 2.0 * re[k];
      gim[k] += gs * 2.0 * im[k];
    }
    for (const auto& c : cs.noise) {
      const std::size_t k = c.first * s.w + c.second;
      gre[k] += gn * 2.0 * re[k];
      gim[k] += gn * 2.0 * im[k];
    }
  }
  return r;
}

LossResult loss_weighted_mse(const Tensor& pred, const Tensor& target, std::span<const SpatialCells> cells,
                             LossWeights wts) {
  require_complex(pred, cells.size(), "loss_weighted_mse");
  if (wts.full < 0 || wts.magnitude < 0 || wts.phase < 0 ||
      std::abs(wts.full + wts.magnitude + wts.phase - 1.0) > 1e-9)
    throw std::invalid_argument("loss_weighted_mse: weights must be nonnegative and sum to 1");

  LossResult r = loss_mse(pred, target);
  r.value *= wts.full;
  for (auto& g : r.grad) g *= wts.full;
  if (wts.magnitude == 0.0 && wts.phase == 0.0) return r;

  const Shape s = pred.shape();
  std::size_t total_peaks = 0;
  for (const auto& cs : cells) total_peaks += cs.peaks.size();
  if (total_peaks == 0) throw std::invalid_argument("loss_weighted_mse: no peak cells");
  const double inv = 1.0 / static_cast<double>(total_peaks);

  constexpr double kTiny = 1e-300;
  double mag_sum = 0.0, ph_sum = 0.0;
  for (std::size_t b = 0; b < s.n; ++b) {
    const auto pre = pred.plane(b, 0), pim = pred.plane(b, 1);
    const auto tre = target.plane(b, 0), tim = target.plane(b, 1);
    auto* gre = r.grad.data() + (b * 2 + 0) * s.plane();
    auto* gim = r.grad.data() + (b * 2 + 1) * s.plane();
    for (const auto& c : cells[b].peaks) {
      const std::size_t k = c.first * s.w + c.second;
      const double x = pre[k], y = pim[k];
      const double r2 = std::max(x * x + y * y, kTiny);
      const double mag = std::sqrt(r2);
      const double dm = mag - std::hypot(tre[k], tim[k]);
      const double dphi = wrap_phase(std::atan2(y, x) - std::atan2(tim[k], tre[k]));
      mag_sum += dm * dm;
      ph_sum += dphi * dphi;
      // d|z|/dx = x/|z|, d arg z/dx = -y/|z|^2, d arg z/dy = x/|z|^2
      const double cm = wts.magnitude * inv * 2.0 * dm;
      const double cp = wts.phase * inv * 2.0 * dphi;
      gre[k] += cm * x / mag - cp * y / r2;
      gim[k] += cm * y / mag + cp * x / r2;
    }
  }
  r.value += wts.magnitude * mag_sum * inv + wts.phase * ph_sum * inv;
  return r;
}

}  // namespace rmi::nn
