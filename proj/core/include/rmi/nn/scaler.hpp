#pragma once

#include <array>
#include <span>

#include "rmi/config.hpp"
#include "rmi/nn/tensor.hpp"

namespace rmi::nn {

/// Fitted standardization. Two-channel data are treated as complex (re, im)
/// pairs; one-channel data as real values, where CSS reduces to ZMUVS.
struct ScalerState {
  ScalerKind kind = ScalerKind::Zmuvs;
  std::size_t channels = 2;
  double mean_re = 0.0;
  double mean_im = 0.0;
  double std = 1.0;                        ///< ZMUVS
  std::array<double, 4> cov{1, 0, 0, 1};   ///< CSS, row-major 2x2
  std::array<double, 4> whiten{1, 0, 0, 1};  ///< cov^(-1/2)
  std::array<double, 4> color{1, 0, 0, 1};   ///< cov^(1/2)

  bool operator==(const ScalerState&) const = default;
};

/// Eigenvalues below 1e-12 of the largest are clamped to that floor; all-zero
/// spread yields the identity transform.
ScalerState fit_scaler(ScalerKind kind, std::span<const Tensor> samples);
void apply_scaler(const ScalerState& s, Tensor& t);
void invert_scaler(const ScalerState& s, Tensor& t);

}  // namespace rmi::nn
