#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmi/config.hpp"
#include "rmi/denoiser.hpp"
#include "rmi/metrics.hpp"
#include "rmi/nn/loss.hpp"
#include "rmi/nn/tensor.hpp"

namespace rmi {

inline constexpr std::uint32_t kDatasetVersion = 1;

struct DatasetHeader {
  Variant variant = Variant::Rdd;
  InputRepr repr = InputRepr::Ris;
  std::uint32_t n = 0;  ///< range bins
  std::uint32_t m = 0;  ///< ramps / Doppler bins
  std::uint64_t n_scenarios = 0;
  std::uint64_t n_samples = 0;
};

/// One network sample. RDD: a full N x M map; RPD: one ramp's 1 x N profile.
struct DatasetRecord {
  std::uint64_t scenario_seed = 0;
  std::uint32_t sample_index = 0;  ///< ramp index for RPD, 0 for RDD
  std::vector<double> input;   ///< channel-major (re/im interleaved for RIS)
  std::vector<double> target;
  std::vector<Cell> peaks;     ///< (range bin, Doppler bin)
  std::uint32_t guard_range = 4;
  std::uint32_t guard_doppler = 4;
};

struct Dataset {
  DatasetHeader header;
  std::vector<DatasetRecord> records;

  std::size_t channels() const { return header.repr == InputRepr::Ris ? 2 : 1; }
  nn::Shape sample_shape() const;
  nn::Tensor input_tensor(std::size_t i) const;
  nn::Tensor target_tensor(std::size_t i) const;
  nn::SpatialCells spatial_cells(std::size_t i) const;
  std::vector<std::uint64_t> scenario_seeds() const;  ///< unique, first-seen order
};

/// Binary container: "RDIM", version, variant, repr, N, M, counts, records.
std::vector<std::uint8_t> encode_dataset(const Dataset& ds);
Dataset decode_dataset(const std::vector<std::uint8_t>& bytes);
void write_dataset(const std::string& path, const Dataset& ds);
Dataset read_dataset(const std::string& path);

struct SplitSeeds {
  std::vector<std::uint64_t> train;
  std::vector<std::uint64_t> val;
  std::vector<std::uint64_t> test;
};

SplitSeeds make_split_seeds(std::uint64_t base_seed, const DatasetSizes& sizes);
/// Throws std::invalid_argument if a seed appears twice anywhere.
void check_disjoint(const SplitSeeds& seeds);

/// Simulates each scenario and converts it into samples. Record order follows
/// `seeds` regardless of `jobs`.
Dataset build_split(const std::vector<std::uint64_t>& seeds, Variant variant, InputRepr repr,
                    const RunConfig& cfg, const ScenarioRanges& ranges, std::size_t jobs = 1);

struct DatasetBundle {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Builds all three splits. The train/validation ranges honor
/// cfg.max_train_interferers.
DatasetBundle make_dataset(const SplitSeeds& seeds, Variant variant, InputRepr repr,
                           const RunConfig& cfg, std::size_t jobs = 1);

}  // namespace rmi
