#include "rmi/nn/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmi::nn {

namespace {

using Mat2 = std::array<double, 4>;

// Symmetric 2x2 matrix function via eigendecomposition.
Mat2 sym_pow(const Mat2& a, double p, double floor_rel) {
  const double x = a[0], y = a[1], z = a[3];
  const double tr = x + z;
  const double disc = std::sqrt(std::max(0.0, (x - z) * (x - z) / 4.0 + y * y));
  double l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
  if (!(l1 > 0.0)) return {1, 0, 0, 1};
  const double fl = l1 * floor_rel;
  l2 = std::max(l2, fl);
  // Eigenvector of l1.
  double vx, vy;
  if (std::abs(y) > 1e-300) {
    vx = l1 - z;
    vy = y;
  } else if (x >= z) {
    vx = 1;
    vy = 0;
  } else {
    vx = 0;
    vy = 1;
  }
  const double nrm = std::hypot(vx, vy);
  vx /= nrm;
  vy /= nrm;
  const double f1 = std::pow(l1, p), f2 = std::pow(l2, p);
  // Q diag(f1, f2) Q^T with Q = [v, v_perp], v_perp = (-vy, vx).
  return {f1 * vx * vx + f2 * vy * vy, (f1 - f2) * vx * vy, (f1 - f2) * vx * vy, f1 * vy * vy + f2 * vx * vx};
}

constexpr double kFloorRel = 1e-12;

}  // namespace

ScalerState fit_scaler(ScalerKind kind, std::span<const Tensor> samples) {
  if (samples.empty()) throw std::invalid_argument("fit_scaler: no samples");
  ScalerState st;
  st.kind = kind;
  st.channels = samples.front().shape().c;
  if (st.channels != 1 && st.channels != 2) throw std::invalid_argument("fit_scaler: expected 1 or 2 channels");

  double s_re = 0, s_im = 0, count = 0;
  for (const auto& t : samples) {
    if (t.shape().c != st.channels) throw std::invalid_argument("fit_scaler: channel mismatch");
    for (std::size_t n = 0; n < t.shape().n; ++n) {
      for (double v : t.plane(n, 0)) s_re += v;
      if (st.channels == 2)
        for (double v : t.plane(n, 1)) s_im += v;
      count += static_cast<double>(t.shape().plane());
    }
  }
  st.mean_re = s_re / count;
  st.mean_im = st.channels == 2 ? s_im / count : 0.0;

  double cxx = 0, cxy = 0, cyy = 0;
  for (const auto& t : samples)
    for (std::size_t n = 0; n < t.shape().n; ++n) {
      const auto re = t.plane(n, 0);
      for (std::size_t k = 0; k < re.size(); ++k) {
        const double dx = re[k] - st.mean_re;
        cxx += dx * dx;
        if (st.channels == 2) {
          const double dy = t.plane(n, 1)[k] - st.mean_im;
          cxy += dx * dy;
          cyy += dy * dy;
        }
      }
    }
  cxx /= count;
  cxy /= count;
  cyy /= count;

  if (kind == ScalerKind::Zmuvs || st.channels == 1) {
    // Standard deviation of the stacked real and imaginary values.
    const double var = st.channels == 2 ? (cxx + cyy) / 2.0 : cxx;
    st.std = var > 0.0 ? std::sqrt(var) : 1.0;
  } else {
    st.cov = {cxx, cxy, cxy, cyy};
    st.whiten = sym_pow(st.cov, -0.5, kFloorRel);
    st.color = sym_pow(st.cov, 0.5, kFloorRel);
  }
  return st;
}

void apply_scaler(const ScalerState& s, Tensor& t) {
  if (t.shape().c != s.channels) throw std::invalid_argument("apply_scaler: channel mismatch");
  for (std::size_t n = 0; n < t.shape().n; ++n) {
    auto re = t.plane(n, 0);
    if (s.kind == ScalerKind::Zmuvs || s.channels == 1) {
      for (auto& v : re) v = (v - s.mean_re) / s.std;
      if (s.channels == 2)
        for (auto& v : t.plane(n, 1)) v = (v - s.mean_im) / s.std;
      continue;
    }
    auto im = t.plane(n, 1);
    const auto& w = s.whiten;
    for (std::size_t k = 0; k < re.size(); ++k) {
      const double x = re[k] - s.mean_re, y = im[k] - s.mean_im;
      re[k] = w[0] * x + w[1] * y;
      im[k] = w[2] * x + w[3] * y;
    }
  }
}

void invert_scaler(const ScalerState& s, Tensor& t) {
  if (t.shape().c != s.channels) throw std::invalid_argument("invert_scaler: channel mismatch");
  for (std::size_t n = 0; n < t.shape().n; ++n) {
    auto re = t.plane(n, 0);
    if (s.kind == ScalerKind::Zmuvs || s.channels == 1) {
      for (auto& v : re) v = v * s.std + s.mean_re;
      if (s.channels == 2)
        for (auto& v : t.plane(n, 1)) v = v * s.std + s.mean_im;
      continue;
    }
    auto im = t.plane(n, 1);
    const auto& c = s.color;
    for (std::size_t k = 0; k < re.size(); ++k) {
      const double x = re[k], y = im[k];
      re[k] = c[0] * x + c[1] * y + s.mean_re;
      im[k] = c[2] * x + c[3] * y + s.mean_im;
    }
  }
}

}  // namespace rmi::nn
