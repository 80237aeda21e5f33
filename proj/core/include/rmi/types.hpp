#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace rmi {

using cplx = std::complex<double>;

/// Row-major 2-D array.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Complex sample cube indexed (fast time n, slow time m, antenna a).
/// Storage keeps each ramp contiguous: offset = (a * m_slow + m) * n_fast + n.
class Cube {
 public:
  Cube() = default;
  Cube(std::size_t n_fast, std::size_t m_slow, std::size_t n_ant)
      : n_fast_(n_fast), m_slow_(m_slow), n_ant_(n_ant), data_(n_fast * m_slow * n_ant) {}

  std::size_t n_fast() const noexcept { return n_fast_; }
  std::size_t m_slow() const noexcept { return m_slow_; }
  std::size_t n_ant() const noexcept { return n_ant_; }
  std::size_t size() const noexcept { return data_.size(); }

  cplx& operator()(std::size_t n, std::size_t m, std::size_t a) {
    return data_[(a * m_slow_ + m) * n_fast_ + n];
  }
  const cplx& operator()(std::size_t n, std::size_t m, std::size_t a) const {
    return data_[(a * m_slow_ + m) * n_fast_ + n];
  }

  std::span<cplx> ramp(std::size_t m, std::size_t a) {
    return {data_.data() + (a * m_slow_ + m) * n_fast_, n_fast_};
  }
  std::span<const cplx> ramp(std::size_t m, std::size_t a) const {
    return {data_.data() + (a * m_slow_ + m) * n_fast_, n_fast_};
  }

  std::vector<cplx>& data() noexcept { return data_; }
  const std::vector<cplx>& data() const noexcept { return data_; }

  bool same_shape(const Cube& o) const noexcept {
    return n_fast_ == o.n_fast_ && m_slow_ == o.m_slow_ && n_ant_ == o.n_ant_;
  }

  Cube& operator+=(const Cube& o);
  Cube& operator*=(double s);

  bool operator==(const Cube&) const = default;

 private:
  std::size_t n_fast_ = 0;
  std::size_t m_slow_ = 0;
  std::size_t n_ant_ = 0;
  std::vector<cplx> data_;
};

inline Cube& Cube::operator+=(const Cube& o) {
  if (!same_shape(o)) throw std::invalid_argument("Cube::operator+=: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

inline Cube& Cube::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

/// Boolean mask stored as bytes (fast time rows, slow time columns).
using Mask = Matrix<std::uint8_t>;

/// Mean squared magnitude over all entries.
double mean_power(std::span<const cplx> values);

}  // namespace rmi
