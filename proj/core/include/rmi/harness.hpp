#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmi/config.hpp"
#include "rmi/dataset.hpp"
#include "rmi/denoiser.hpp"
#include "rmi/metrics.hpp"
#include "rmi/trainer.hpp"

namespace rmi {

/// Evaluation method: interfered, noisy, zeroing, rfmin, imat or cnn:<checkpoint>.
struct MethodSpec {
  std::string name;        ///< tag written to reports
  std::string checkpoint;  ///< cnn only
  const DenoiserModel* model = nullptr;  ///< cnn only; not owned
};

/// Parses a comma-separated method list. Throws on unknown names.
std::vector<MethodSpec> parse_methods(const std::string& list);
const std::vector<std::string>& classical_method_names();

/// RD maps (all antennas) produced by one method on one frame.
std::vector<SpectrumMatrix> method_rd_maps(const MethodSpec& method, const IfFrame& frame,
                                           const RunConfig& cfg);

/// Per-scenario metrics of one method against the frame's references.
MetricsRecord score_method(const MethodSpec& method, const IfFrame& frame, const RunConfig& cfg);

/// Monte-Carlo evaluation over test seeds; records ordered by method then seed.
MetricsReport run_eval(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                       const std::vector<MethodSpec>& methods, std::size_t jobs);

// -- command entry points; all outputs written atomically ------------------

/// Writes <out>/config.json and <out>/{train,val,test}.rdim.
void cmd_gen(const RunConfig& cfg, const std::string& out_dir, Variant variant, InputRepr repr,
             std::size_t jobs);

/// Trains on <dataset>/train.rdim with validation on val.rdim. Writes the
/// checkpoint and <checkpoint>.log.csv.
TrainResult cmd_train(const std::string& dataset_dir, const ModelSpec& spec,
                      const TrainingConfig& tcfg, const std::string& out_checkpoint);

/// Writes records.csv, cdf_<method>.csv per method, summary.json, summary.csv.
MetricsReport cmd_eval(const std::string& dataset_dir, const std::vector<MethodSpec>& methods,
                       std::size_t jobs, const std::string& out_dir);

struct CutTables {
  std::string range_csv;     ///< distance_m, one dB column per method
  std::string velocity_csv;  ///< velocity_m_s, one dB column per method
  std::size_t range_bin = 0;
  std::size_t doppler_bin = 0;
};

/// Magnitude-normalized dB cuts of antenna-0 RD maps through (d, v). With
/// `place_object` the scenario's first object is moved to (d, v).
CutTables compute_cuts(const RunConfig& cfg, std::uint64_t scenario_seed,
                       const std::vector<MethodSpec>& methods, double distance, double velocity,
                       bool place_object = true);
CutTables cmd_cuts(const RunConfig& cfg, std::uint64_t scenario_seed,
                   const std::vector<MethodSpec>& methods, double distance, double velocity,
                   const std::string& out_dir, bool place_object = true);

struct SweepGrid {
  Variant variant = Variant::Rdd;
  InputRepr repr = InputRepr::Ris;
  std::vector<std::size_t> layers{4, 6, 8};
  std::vector<std::size_t> kernels{2, 8, 16, 32};
  std::vector<std::pair<std::size_t, std::size_t>> kernel_sizes{{1, 1}, {3, 3}, {5, 5}, {7, 7}};

  std::vector<ModelSpec> specs() const;
};

struct SweepRow {
  ModelSpec spec;
  std::size_t params = 0;
  MethodSummary metrics;
  double best_val_loss = 0.0;
};

/// Trains every grid spec independently and evaluates it on the test seeds.
/// Rows are ranked by mean RD SINR (descending), ties by parameter count.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const DatasetBundle& data,
                                const RunConfig& cfg, std::size_t jobs);
std::string sweep_csv(const std::vector<SweepRow>& rows);
void cmd_sweep(const std::string& dataset_dir, const SweepGrid& grid, const TrainingConfig& tcfg,
               std::size_t jobs, const std::string& out_csv);

/// Dataset directory helpers.
RunConfig load_dataset_config(const std::string& dataset_dir);
DatasetBundle load_dataset_bundle(const std::string& dataset_dir);

}  // namespace rmi
