#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>

namespace rmi {

inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kPi = std::numbers::pi;

/// Pairwise summation; error grows as O(log n) instead of O(n).
template <class T, class F>
double pairwise_sum(std::span<const T> v, F&& f) {
  constexpr std::size_t kBlock = 64;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (const auto& x : v) s += f(x);
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h), f) + pairwise_sum(v.subspan(h), f);
}

template <class T>
double pairwise_sum(std::span<const T> v) {
  return pairwise_sum(v, [](const T& x) { return static_cast<double>(x); });
}

inline double db10(double ratio) { return 10.0 * std::log10(ratio); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace rmi
