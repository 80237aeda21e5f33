#include "rmi/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rmi/nn/adam.hpp"
#include "rmi/nn/loss.hpp"
#include "rmi/rng.hpp"

namespace rmi {

namespace {

struct Prepared {
  std::vector<nn::Tensor> inputs;
  std::vector<nn::Tensor> targets;
  std::vector<nn::SpatialCells> cells;
};

bool needs_cells(LossKind k) { return k != LossKind::Mse; }

void check_loss_supported(const ModelSpec& spec, LossKind kind) {
  if (kind != LossKind::Mse && spec.repr != InputRepr::Ris)
    throw std::invalid_argument("loss '" + to_string(kind) + "' requires the RIS representation");
}

Prepared prepare(const Dataset& ds, const nn::ScalerState& scaler, LossKind kind) {
  Prepared p;
  p.inputs.reserve(ds.records.size());
  p.targets.reserve(ds.records.size());
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    p.inputs.push_back(ds.input_tensor(i));
    p.targets.push_back(ds.target_tensor(i));
    nn::apply_scaler(scaler, p.inputs.back());
    nn::apply_scaler(scaler, p.targets.back());
    if (needs_cells(kind)) p.cells.push_back(ds.spatial_cells(i));
  }
  return p;
}

nn::LossResult compute_loss(const TrainingConfig& cfg, const nn::Tensor& pred, const nn::Tensor& target,
                            std::span<const nn::SpatialCells> cells) {
  switch (cfg.loss) {
    case LossKind::Mse:
      return nn::loss_mse(pred, target);
    case LossKind::Sinr:
      return nn::loss_sinr(pred, cells);
    case LossKind::WeightedMse:
      return nn::loss_weighted_mse(pred, target, cells, {cfg.w_full, cfg.w_mag, cfg.w_phase});
  }
  throw std::logic_error("unknown loss");
}

struct Batch {
  nn::Tensor input;
  nn::Tensor target;
  std::vector<nn::SpatialCells> cells;
};

Batch make_batch(const Prepared& p, std::span<const std::size_t> idx) {
  std::vector<const nn::Tensor*> in, tg;
  Batch b;
  for (auto i : idx) {
    in.push_back(&p.inputs[i]);
    tg.push_back(&p.targets[i]);
    if (!p.cells.empty()) b.cells.push_back(p.cells[i]);
  }
  b.input = nn::stack(in);
  b.target = nn::stack(tg);
  return b;
}

double step(DenoiserModel& model, nn::Adam& opt, const Batch& b, const TrainingConfig& cfg) {
  ForwardCache cache;
  model.zero_grad();
  const nn::Tensor pred = model.forward_train(b.input, cache);
  const auto loss = compute_loss(cfg, pred, b.target, b.cells);
  if (!std::isfinite(loss.value)) throw std::runtime_error("training diverged: loss is not finite");
  model.backward(cache, loss.grad);
  opt.step(model.parameters(), cfg.lr);
  return loss.value;
}

double mean_loss(const DenoiserModel& model, const Prepared& p, const TrainingConfig& cfg) {
  if (p.inputs.empty()) return std::numeric_limits<double>::quiet_NaN();
  double total = 0.0;
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    const nn::Tensor pred = model.forward(p.inputs[i]);
    std::span<const nn::SpatialCells> cells;
    if (!p.cells.empty()) cells = std::span(&p.cells[i], 1);
    total += compute_loss(cfg, pred, p.targets[i], cells).value;
  }
  return total / static_cast<double>(p.inputs.size());
}

std::vector<nn::Tensor> raw_inputs(const Dataset& ds) {
  std::vector<nn::Tensor> v;
  v.reserve(ds.records.size());
  for (std::size_t i = 0; i < ds.records.size(); ++i) v.push_back(ds.input_tensor(i));
  return v;
}

void check_compatible(const DenoiserModel& model, const Dataset& ds) {
  const auto& s = model.spec();
  if (s.variant != ds.header.variant || s.repr != ds.header.repr)
    throw std::invalid_argument("model " + s.label() + " does not match dataset (" + to_string(ds.header.variant) +
                                ", " + to_string(ds.header.repr) + ")");
}

}  // namespace

TrainResult train(DenoiserModel model, const Dataset& train_set, const Dataset& val_set, const TrainingConfig& cfg) {
  if (train_set.records.empty()) throw std::invalid_argument("train: empty training set");
  if (cfg.batch_size == 0) throw std::invalid_argument("train: batch size must be positive");
  check_compatible(model, train_set);
  check_compatible(model, val_set);
  check_loss_supported(model.spec(), cfg.loss);

  model.scaler = nn::fit_scaler(cfg.scaler, raw_inputs(train_set));
  const Prepared tr = prepare(train_set, model.scaler, cfg.loss);
  const Prepared va = prepare(val_set, model.scaler, cfg.loss);

  nn::Adam opt;
  Rng rng(mix_seed(cfg.seed ^ 0x747261696Eull));
  std::vector<std::size_t> order(tr.inputs.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  result.best_val_loss = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_count(0, i - 1)]);
    std::size_t steps = 0;
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      if (cfg.max_steps_per_epoch && steps >= cfg.max_steps_per_epoch) break;
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      loss_sum += step(model, opt, make_batch(tr, std::span(order).subspan(start, len)), cfg);
      ++steps;
    }
    const double val = va.inputs.empty() ? loss_sum / steps : mean_loss(model, va, cfg);
    if (!std::isfinite(val)) throw std::runtime_error("training diverged: validation loss is not finite");
    result.log.push_back({epoch, steps, loss_sum / static_cast<double>(steps), val});
    if (val < result.best_val_loss) {
      result.best_val_loss = val;
      result.best_epoch = epoch;
      result.model = model;
      since_best = 0;
    } else if (++since_best >= cfg.patience && cfg.patience > 0) {
      break;
    }
  }
  return result;
}

double evaluate_loss(const DenoiserModel& model, const Dataset& ds, const TrainingConfig& cfg) {
  check_compatible(model, ds);
  check_loss_supported(model.spec(), cfg.loss);
  return mean_loss(model, prepare(ds, model.scaler, cfg.loss), cfg);
}

std::vector<double> overfit_single(DenoiserModel& model, const Dataset& ds, std::size_t index, std::size_t steps,
                                   const TrainingConfig& cfg) {
  check_compatible(model, ds);
  check_loss_supported(model.spec(), cfg.loss);
  if (index >= ds.records.size()) throw std::out_of_range("overfit_single: sample index out of range");
  Dataset one;
  one.header = ds.header;
  one.records = {ds.records[index]};
  one.header.n_samples = 1;
  model.scaler = nn::fit_scaler(cfg.scaler, raw_inputs(one));
  const Prepared p = prepare(one, model.scaler, cfg.loss);
  const std::size_t idx[1] = {0};
  const Batch b = make_batch(p, idx);
  nn::Adam opt;
  std::vector<double> losses;
  losses.reserve(steps);
  for (std::size_t s = 0; s < steps; ++s) losses.push_back(step(model, opt, b, cfg));
  return losses;
}

std::string training_log_csv(const std::vector<TrainLogRow>& log) {
  std::string out = "epoch,steps,train_loss,val_loss\n";
  char buf[128];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.12g,%.12g\n", r.epoch, r.steps, r.train_loss, r.val_loss);
    out += buf;
  }
  return out;
}

}  // namespace rmi
