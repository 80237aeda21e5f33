#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rmi/nn/tensor.hpp"

namespace rmi::nn {

/// Peak and noise positions of one batch entry, in (h, w) tensor coordinates.
struct SpatialCells {
  std::vector<std::pair<std::size_t, std::size_t>> peaks;
  std::vector<std::pair<std::size_t, std::size_t>> noise;
};

struct LossResult {
  double value = 0.0;
  std::vector<double> grad;  ///< d value / d pred, pred's layout
};

/// Mean of squared differences over every element.
LossResult loss_mse(const Tensor& pred, const Tensor& target);

/// Negative peak-to-noise power ratio (linear), averaged over the batch.
/// Requires two channels (real, imaginary).
LossResult loss_sinr(const Tensor& pred, std::span<const SpatialCells> cells);

struct LossWeights {
  double full = 0.5;
  double magnitude = 0.25;
  double phase = 0.25;
};

/// Convex combination of full-spectrum MSE, peak-magnitude MSE and wrapped
/// peak-phase MSE. Requires two channels.
LossResult loss_weighted_mse(const Tensor& pred, const Tensor& target,
                             std::span<const SpatialCells> cells, LossWeights weights = {});

}  // namespace rmi::nn
