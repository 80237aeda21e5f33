#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rmi/config.hpp"
#include "rmi/dataset.hpp"
#include "rmi/denoiser.hpp"

namespace rmi {

struct TrainLogRow {
  std::size_t epoch = 0;
  std::size_t steps = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  DenoiserModel model;  ///< best-validation weights
  std::vector<TrainLogRow> log;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
};

/// Adam on mini-batches. The scaler is fitted on training inputs and applied
/// to both inputs and targets. Aborts with std::runtime_error on a NaN loss.
TrainResult train(DenoiserModel model, const Dataset& train_set, const Dataset& val_set,
                  const TrainingConfig& cfg);

/// Mean loss of `model` on `ds` (inputs/targets scaled by the model's scaler).
double evaluate_loss(const DenoiserModel& model, const Dataset& ds, const TrainingConfig& cfg);

/// Repeated steps on a single sample; returns the loss after each step.
std::vector<double> overfit_single(DenoiserModel& model, const Dataset& ds, std::size_t index,
                                   std::size_t steps, const TrainingConfig& cfg);

std::string training_log_csv(const std::vector<TrainLogRow>& log);

}  // namespace rmi
