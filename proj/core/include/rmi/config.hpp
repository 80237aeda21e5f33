#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rmi {

enum class WindowType { Hann };

/// Victim radar and signal-processing parameters. Defaults are the full-size
/// automotive setup (76 GHz, 1 GHz sweep over 48 us, 1024 x 128 x 8).
struct VictimRadarConfig {
  double f0_v = 76e9;
  double bw_v = 1e9;
  double t_v = 48e-6;
  double b_if = 20e6;
  std::size_t n_fast = 1024;
  std::size_t m_slow = 128;
  std::size_t n_ant = 8;
  WindowType window = WindowType::Hann;

  void validate() const;

  double wavelength() const;
  double sample_rate() const { return static_cast<double>(n_fast) / t_v; }
  double chirp_slope() const { return bw_v / t_v; }
  /// Range bin width c / (2 B).
  double range_resolution() const;
  /// Doppler bin width lambda / (2 M T).
  double velocity_resolution() const;
  /// Largest distance representable without aliasing (N range bins).
  double max_unambiguous_range() const;
  /// Antenna spacing (half wavelength at f0_v).
  double antenna_spacing() const { return wavelength() / 2.0; }

  bool operator==(const VictimRadarConfig&) const = default;
};

struct RealRange {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const RealRange&) const = default;
};

struct CountRange {
  std::size_t min = 0;
  std::size_t max = 0;
  bool operator==(const CountRange&) const = default;
};

/// Uniform sampling ranges for random scenarios.
struct ScenarioRanges {
  CountRange n_objects{1, 20};
  RealRange distance{0.0, 153.0};
  RealRange velocity{-20.0, 20.0};
  RealRange azimuth{-1.5707963267948966, 1.5707963267948966};
  CountRange n_interferers{1, 3};
  RealRange f0_i{75.8e9, 76.2e9};
  RealRange bw_i{0.6e9, 1.4e9};
  RealRange t_i{40e-6, 46e-6};
  RealRange interferer_azimuth{-1.5707963267948966, 1.5707963267948966};
  RealRange sir_db{-60.0, -20.0};
  RealRange snr_db{-10.0, 10.0};

  /// Throws std::invalid_argument when any min > max.
  void validate() const;
  bool operator==(const ScenarioRanges&) const = default;
};

struct ImatParams {
  std::size_t max_iter = 30;
  double threshold_decay = 0.8;
  double stop_tol = 1e-6;

  void validate() const;
};

enum class EvmReference { Noisy, ObjectOnly };

struct MetricsConfig {
  std::size_t guard_range = 4;
  std::size_t guard_doppler = 4;
  std::size_t n_as = 64;
  std::size_t guard_as = 16;
  EvmReference evm_reference = EvmReference::Noisy;
};

struct DatasetSizes {
  std::size_t train = 2000;
  std::size_t val = 250;
  std::size_t test = 250;
};

enum class LossKind { Mse, Sinr, WeightedMse };
enum class ScalerKind { Zmuvs, Css };

struct TrainingConfig {
  double lr = 5e-5;
  std::size_t batch_size = 2;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  /// Optional cap on optimizer steps per epoch (0 = full pass).
  std::size_t max_steps_per_epoch = 0;
  LossKind loss = LossKind::Mse;
  ScalerKind scaler = ScalerKind::Css;
  double w_full = 0.5;
  double w_mag = 0.25;
  double w_phase = 0.25;
  std::uint64_t seed = 1;
};

/// Everything a harness run needs.
struct RunConfig {
  VictimRadarConfig radar;
  ScenarioRanges ranges;
  ImatParams imat;
  MetricsConfig metrics;
  DatasetSizes sizes;
  TrainingConfig training;
  /// Generalization experiment: caps N_I for train/validation splits (0 = off).
  std::size_t max_train_interferers = 0;
  std::uint64_t seed = 1;
};

enum class Scale { Full, Desk };

/// Full-size defaults (N=1024, M=128, 2000/250/250).
RunConfig default_run_config();
/// Reduced setup for a single CPU: N=256, M=64, 250 MHz in 12 us, 200/25/25.
RunConfig desk_run_config();
RunConfig run_config_for(Scale scale);
Scale parse_scale(const std::string& s);

std::string to_json(const RunConfig& cfg);
/// Parses a JSON document; missing keys keep the values of `base`.
RunConfig run_config_from_json(const std::string& text, const RunConfig& base);
RunConfig load_run_config(const std::string& path, const RunConfig& base);

std::string to_string(LossKind k);
std::string to_string(ScalerKind k);
LossKind parse_loss(const std::string& s);
ScalerKind parse_scaler(const std::string& s);

}  // namespace rmi
