#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rmi/config.hpp"
#include "rmi/rd_chain.hpp"
#include "rmi/sim.hpp"

namespace rmi {

using Cell = std::pair<std::size_t, std::size_t>;  // (range bin, Doppler bin)

struct CellSets {
  std::vector<Cell> peak_cells;
  std::vector<Cell> noise_cells;
  std::size_t guard_range = 4;
  std::size_t guard_doppler = 4;
  std::size_t n_bins = 0;
  std::size_t m_bins = 0;
};

/// RD cell nearest to an object (Doppler index already centered).
Cell object_cell(const ObjectParams& obj, const VictimRadarConfig& cfg);

/// Peaks are the nearest RD bins to each object (duplicates merged); noise
/// cells are all cells outside every peak's guard box.
CellSets cell_sets(const Scenario& scenario, const VictimRadarConfig& cfg,
                   std::size_t guard_range = 4, std::size_t guard_doppler = 4);
CellSets cell_sets_from_peaks(std::vector<Cell> peaks, std::size_t n_bins, std::size_t m_bins,
                              std::size_t guard_range, std::size_t guard_doppler);

inline constexpr double kInfSinr = std::numeric_limits<double>::infinity();

/// Mean peak power over mean noise-cell power in dB; +inf for zero noise.
double sinr_rd(const SpectrumMatrix& map, const CellSets& cells);
double sinr_rd(const Matrix<cplx>& map, const CellSets& cells);

/// Mean relative error magnitude at the peak cells.
double evm_rd(const SpectrumMatrix& clean, const SpectrumMatrix& denoised, const CellSets& cells);
double evm_rd(const Matrix<cplx>& clean, const Matrix<cplx>& denoised, const CellSets& cells);

/// 1-D analogue of sinr_rd; noise bins are those with circular distance
/// greater than `guard` from `peak_bin`.
double sinr_as(const AngularSpectrum& as, std::size_t peak_bin, std::size_t guard);

struct CdfPoint {
  double value;
  double probability;
};

/// Empirical CDF: sorted values against k/n, k = 1..n.
std::vector<CdfPoint> aggregate_cdf(std::vector<double> values);

struct MetricsRecord {
  std::string method;
  std::uint64_t scenario_seed = 0;
  double sinr_rd_db = 0.0;
  double evm_rd = 0.0;
  double sinr_as_db = 0.0;
};

struct MethodSummary {
  std::string method;
  std::size_t count = 0;
  double mean_sinr_rd_db = 0.0;
  double mean_evm_rd = 0.0;
  double mean_sinr_as_db = 0.0;
  double std_sinr_rd_db = 0.0;
};

struct MetricsReport {
  std::vector<MetricsRecord> records;

  std::vector<std::string> methods() const;  ///< first-seen order
  std::vector<MetricsRecord> for_method(const std::string& method) const;
  MethodSummary summary(const std::string& method) const;

  std::string records_csv() const;
  /// One CDF table per method: columns k, probability and each metric sorted.
  std::string cdf_csv(const std::string& method) const;
  /// Means in the row order noisy, interfered, zeroing, rfmin, imat, cnn:*.
  std::string summary_json() const;
  std::string summary_csv() const;
};

/// Display/report ordering of methods.
std::vector<std::string> ordered_methods(std::vector<std::string> methods);

}  // namespace rmi
