#include "rmi/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmi/fft.hpp"

namespace rmi {

IfFrame zeroing(const IfFrame& frame) {
  IfFrame out = frame;
  const auto& mask = frame.interference_mask;
  for (std::size_t a = 0; a < out.samples.n_ant(); ++a)
    for (std::size_t m = 0; m < out.samples.m_slow(); ++m) {
      auto ramp = out.samples.ramp(m, a);
      for (std::size_t n = 0; n < ramp.size(); ++n)
        if (mask(n, m)) ramp[n] = cplx{};
    }
  return out;
}

std::vector<cplx> imat_reconstruct(std::span<const cplx> x, std::span<const std::uint8_t> gap,
                                   const ImatParams& params) {
  params.validate();
  const std::size_t N = x.size();
  std::vector<cplx> est(x.begin(), x.end());
  bool any_gap = false;
  for (std::size_t n = 0; n < N; ++n)
    if (gap[n]) {
      est[n] = cplx{};
      any_gap = true;
    }
  if (!any_gap) return est;

  std::vector<cplx> spec(est);
  fft_inplace(spec);
  double t1 = 0.0;
  for (const auto& v : spec) t1 = std::max(t1, std::abs(v));
  if (t1 == 0.0) return est;

  double threshold = t1;
  for (std::size_t k = 1; k <= params.max_iter; ++k) {
    // Iteration k keeps coefficients above T1 * decay^k.
    threshold *= params.threshold_decay;
    spec = est;
    fft_inplace(spec);
    for (auto& v : spec)
      if (std::abs(v) <= threshold) v = cplx{};
    ifft_inplace(spec);

    double diff = 0.0, norm = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      norm += std::norm(est[n]);
      if (!gap[n]) continue;
      diff += std::norm(spec[n] - est[n]);
      est[n] = spec[n];
    }
    if (norm == 0.0) norm = std::numeric_limits<double>::min();
    if (std::sqrt(diff / norm) < params.stop_tol) break;
  }
  return est;
}

IfFrame imat(const IfFrame& frame, const ImatParams& params) {
  params.validate();
  IfFrame out = frame;
  const std::size_t N = frame.samples.n_fast();
  std::vector<std::uint8_t> gap(N);
  for (std::size_t m = 0; m < frame.samples.m_slow(); ++m) {
    bool any = false;
    for (std::size_t n = 0; n < N; ++n) {
      gap[n] = frame.interference_mask(n, m);
      any = any || gap[n];
    }
    if (!any) continue;
    for (std::size_t a = 0; a < frame.samples.n_ant(); ++a) {
      const auto rec = imat_reconstruct(frame.samples.ramp(m, a), gap, params);
      std::copy(rec.begin(), rec.end(), out.samples.ramp(m, a).begin());
    }
  }
  return out;
}

SpectrumMatrix rfmin(const SpectrumMatrix& rp) {
  if (rp.stage != Stage::RangeProfile) throw std::invalid_argument("rfmin: expected a range profile");
  SpectrumMatrix out = rp;
  for (std::size_t n = 0; n < rp.n_bins(); ++n) {
    const auto row = rp.values.row(n);
    double mu = std::numeric_limits<double>::infinity();
    for (const auto& v : row) mu = std::min(mu, std::abs(v));
    auto orow = out.values.row(n);
    for (std::size_t m = 0; m < row.size(); ++m) {
      const double mag = std::abs(row[m]);
      orow[m] = mag > 0.0 ? row[m] * (mu / mag) : cplx{};
    }
  }
  return out;
}

std::vector<SpectrumMatrix> rfmin(const std::vector<SpectrumMatrix>& rps) {
  std::vector<SpectrumMatrix> out;
  out.reserve(rps.size());
  for (const auto& rp : rps) out.push_back(rfmin(rp));
  return out;
}

}  // namespace rmi
