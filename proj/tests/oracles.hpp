// Independent reference implementations used by the tests.
#pragma once

#include <cmath>
#include <complex>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "rmi/metrics.hpp"
#include "rmi/types.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

inline std::vector<double> hann(std::size_t L) {
  std::vector<double> w(L);
  for (std::size_t k = 0; k < L; ++k) w[k] = 0.5 - 0.5 * std::cos(2.0 * pi * double(k) / double(L));
  return w;
}

inline std::vector<cplx> dft(const std::vector<cplx>& x) {
  const std::size_t N = x.size();
  std::vector<cplx> X(N);
  for (std::size_t k = 0; k < N; ++k) {
    cplx acc{};
    for (std::size_t n = 0; n < N; ++n) acc += x[n] * std::polar(1.0, -2.0 * pi * double((k * n) % N) / double(N));
    X[k] = acc;
  }
  return X;
}

inline rmi::Matrix<cplx> random_matrix(std::size_t r, std::size_t c, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  rmi::Matrix<cplx> m(r, c);
  for (auto& v : m.data()) v = {nd(g), nd(g)};
  return m;
}


inline std::size_t circ(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

// Literal SINR: peak-cell mean power over noise-cell mean power, with the
// noise set built by checking every cell against every peak's guard box.
inline double literal_sinr(const rmi::Matrix<cplx>& S, const std::vector<rmi::Cell>& peaks, std::size_t gr,
                           std::size_t gd) {
  double ps = 0.0;
  for (const auto& [r, d] : peaks) ps += std::norm(S(r, d));
  ps /= double(peaks.size());
  double pn = 0.0;
  std::size_t nn = 0;
  for (std::size_t r = 0; r < S.rows(); ++r)
    for (std::size_t d = 0; d < S.cols(); ++d) {
      bool noise = true;
      for (const auto& [pr, pd] : peaks)
        if (circ(r, pr, S.rows()) <= gr && circ(d, pd, S.cols()) <= gd) noise = false;
      if (noise) {
        pn += std::norm(S(r, d));
        ++nn;
      }
    }
  return 10.0 * std::log10(ps / (pn / double(nn)));
}

inline double literal_evm(const rmi::Matrix<cplx>& clean, const rmi::Matrix<cplx>& den,
                          const std::vector<rmi::Cell>& peaks) {
  double acc = 0.0;
  for (const auto& [r, d] : peaks) acc += std::abs(clean(r, d) - den(r, d)) / std::abs(clean(r, d));
  return acc / double(peaks.size());
}

inline double literal_sinr_as(const std::vector<cplx>& as, std::size_t peak, std::size_t guard) {
  double pn = 0.0;
  std::size_t nn = 0;
  for (std::size_t k = 0; k < as.size(); ++k)
    if (circ(k, peak, as.size()) > guard) {
      pn += std::norm(as[k]);
      ++nn;
    }
  return 10.0 * std::log10(std::norm(as[peak]) / (pn / double(nn)));
}

// Norm-wise relative error between an analytic and a central-difference gradient.
inline double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double den = std::max(std::sqrt(std::max(na, nb)), 1e-12);
  return std::sqrt(d) / den;
}

inline std::vector<double> numeric_grad(std::vector<double>& x, const std::function<double()>& f, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double fp = f();
    x[i] = keep - h;
    const double fm = f();
    x[i] = keep;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace oracle
