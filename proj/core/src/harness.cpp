#include "rmi/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "rmi/io.hpp"
#include "rmi/mitigation.hpp"
#include "rmi/rd_chain.hpp"
#include "rmi/sim.hpp"

namespace fs = std::filesystem;

namespace rmi {

namespace {

constexpr std::string_view kCnnPrefix = "cnn:";

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string file_tag(const std::string& method) {
  std::string out;
  for (char c : method) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return out;
}

std::vector<SpectrumMatrix> cnn_rd_maps(const DenoiserModel& model, const IfFrame& frame) {
  const auto& spec = model.spec();
  // LMS outputs carry the input phase only, so the other antennas stay raw.
  const std::size_t n_denoised = spec.repr == InputRepr::Ris ? frame.cfg.n_ant : 1;
  auto rps = range_dft(frame);
  if (spec.variant == Variant::Rpd) {
    for (std::size_t a = 0; a < n_denoised; ++a) rps[a] = denoise_rpd(model, rps[a]);
    return doppler_dft(rps, frame.cfg);
  }
  auto rd = doppler_dft(rps, frame.cfg);
  for (std::size_t a = 0; a < n_denoised; ++a) rd[a] = denoise_rdd(model, rd[a]);
  return rd;
}

std::size_t argmax_power(const std::vector<cplx>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::norm(v[i]) > std::norm(v[best])) best = i;
  return best;
}

}  // namespace

const std::vector<std::string>& classical_method_names() {
  static const std::vector<std::string> names{"interfered", "noisy", "zeroing", "rfmin", "imat"};
  return names;
}

std::vector<MethodSpec> parse_methods(const std::string& list) {
  std::vector<MethodSpec> out;
  std::stringstream ss(list);
  std::string item;
  const auto& classical = classical_method_names();
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item.starts_with(kCnnPrefix)) {
      if (item.size() == kCnnPrefix.size()) throw std::invalid_argument("method 'cnn:' needs a checkpoint path");
      out.push_back({item, item.substr(kCnnPrefix.size()), nullptr});
    } else if (std::find(classical.begin(), classical.end(), item) != classical.end()) {
      out.push_back({item, "", nullptr});
    } else {
      throw std::invalid_argument("unknown method '" + item +
                                  "' (expected interfered, noisy, zeroing, rfmin, imat or cnn:<checkpoint>)");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

std::vector<SpectrumMatrix> method_rd_maps(const MethodSpec& method, const IfFrame& frame, const RunConfig& cfg) {
  const auto& radar = frame.cfg;
  if (method.name == "interfered") return rd_maps(frame.samples, radar);
  if (method.name == "noisy") return rd_maps(frame.clean_samples, radar);
  if (method.name == "zeroing") return rd_maps(zeroing(frame).samples, radar);
  if (method.name == "imat") return rd_maps(imat(frame, cfg.imat).samples, radar);
  if (method.name == "rfmin") return doppler_dft(rfmin(range_dft(frame)), radar);
  if (method.name.starts_with(kCnnPrefix)) {
    if (!method.model) throw std::invalid_argument("method " + method.name + " has no loaded model");
    return cnn_rd_maps(*method.model, frame);
  }
  throw std::invalid_argument("unknown method '" + method.name + "'");
}

MetricsRecord score_method(const MethodSpec& method, const IfFrame& frame, const RunConfig& cfg) {
  const auto& m = cfg.metrics;
  const auto cells = cell_sets(frame.scenario, frame.cfg, m.guard_range, m.guard_doppler);
  const auto maps = method_rd_maps(method, frame, cfg);
  const auto objects = rd_maps(frame.object_samples, frame.cfg);
  const Cube& ref_cube = m.evm_reference == EvmReference::Noisy ? frame.clean_samples : frame.object_samples;
  const auto reference = m.evm_reference == EvmReference::Noisy ? rd_maps(ref_cube, frame.cfg) : objects;

  MetricsRecord r;
  r.method = method.name;
  r.scenario_seed = frame.scenario.seed;
  r.sinr_rd_db = sinr_rd(maps[0], cells);
  r.evm_rd = evm_rd(reference[0], maps[0], cells);
  double as_sum = 0.0;
  for (const auto& peak : cells.peak_cells) {
    const std::size_t bin = argmax_power(angular_spectrum(objects, peak, m.n_as).values);
    as_sum += sinr_as(angular_spectrum(maps, peak, m.n_as), bin, m.guard_as);
  }
  r.sinr_as_db = as_sum / static_cast<double>(cells.peak_cells.size());
  return r;
}

MetricsReport run_eval(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                       const std::vector<MethodSpec>& methods, std::size_t jobs) {
  std::vector<std::vector<MetricsRecord>> per_seed(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    const IfFrame frame = assemble_frame(sample_scenario(seeds[i], cfg.ranges), cfg.radar);
    for (const auto& method : methods) per_seed[i].push_back(score_method(method, frame, cfg));
  });
  MetricsReport report;
  for (std::size_t k = 0; k < methods.size(); ++k)
    for (const auto& recs : per_seed) report.records.push_back(recs[k]);
  return report;
}

void cmd_gen(const RunConfig& cfg, const std::string& out_dir, Variant variant, InputRepr repr, std::size_t jobs) {
  cfg.radar.validate();
  cfg.ranges.validate();
  const auto seeds = make_split_seeds(cfg.seed, cfg.sizes);
  const auto bundle = make_dataset(seeds, variant, repr, cfg, jobs);
  fs::create_directories(out_dir);
  write_dataset(join(out_dir, "train.rdim"), bundle.train);
  write_dataset(join(out_dir, "val.rdim"), bundle.val);
  write_dataset(join(out_dir, "test.rdim"), bundle.test);
  write_file_atomic(join(out_dir, "config.json"), to_json(cfg));
}

RunConfig load_dataset_config(const std::string& dataset_dir) {
  return load_run_config(join(dataset_dir, "config.json"), default_run_config());
}

DatasetBundle load_dataset_bundle(const std::string& dataset_dir) {
  DatasetBundle b;
  b.train = read_dataset(join(dataset_dir, "train.rdim"));
  b.val = read_dataset(join(dataset_dir, "val.rdim"));
  b.test = read_dataset(join(dataset_dir, "test.rdim"));
  return b;
}

TrainResult cmd_train(const std::string& dataset_dir, const ModelSpec& spec, const TrainingConfig& tcfg,
                      const std::string& out_checkpoint) {
  spec.validate();
  const Dataset train_set = read_dataset(join(dataset_dir, "train.rdim"));
  const Dataset val_set = read_dataset(join(dataset_dir, "val.rdim"));
  TrainResult result = train(build_model(spec, tcfg.seed), train_set, val_set, tcfg);
  const fs::path parent = fs::path(out_checkpoint).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  save_checkpoint(result.model, out_checkpoint);
  write_file_atomic(out_checkpoint + ".log.csv", training_log_csv(result.log));
  return result;
}

MetricsReport cmd_eval(const std::string& dataset_dir, const std::vector<MethodSpec>& methods, std::size_t jobs,
                       const std::string& out_dir) {
  const RunConfig cfg = load_dataset_config(dataset_dir);
  const auto seeds = read_dataset(join(dataset_dir, "test.rdim")).scenario_seeds();
  std::vector<std::unique_ptr<DenoiserModel>> owned;
  std::vector<MethodSpec> resolved = methods;
  for (auto& m : resolved) {
    if (m.name.starts_with(kCnnPrefix) && !m.model) {
      owned.push_back(std::make_unique<DenoiserModel>(load_checkpoint(m.checkpoint)));
      m.model = owned.back().get();
    }
  }
  const MetricsReport report = run_eval(cfg, seeds, resolved, jobs);
  fs::create_directories(out_dir);
  write_file_atomic(join(out_dir, "records.csv"), report.records_csv());
  for (const auto& m : report.methods())
    write_file_atomic(join(out_dir, "cdf_" + file_tag(m) + ".csv"), report.cdf_csv(m));
  write_file_atomic(join(out_dir, "summary.json"), report.summary_json());
  write_file_atomic(join(out_dir, "summary.csv"), report.summary_csv());
  return report;
}

CutTables compute_cuts(const RunConfig& cfg, std::uint64_t scenario_seed, const std::vector<MethodSpec>& methods,
                       double distance, double velocity, bool place_object) {
  const auto d_axis = distance_axis(cfg.radar);
  const auto v_axis = velocity_axis(cfg.radar);
  if (!(distance >= 0.0 && distance < cfg.radar.max_unambiguous_range()))
    throw std::out_of_range("cut distance " + fmt(distance) + " m outside [0, " +
                            fmt(cfg.radar.max_unambiguous_range()) + ") m");
  const double dv = cfg.radar.velocity_resolution();
  if (!(velocity >= v_axis.front() - dv / 2 && velocity < v_axis.back() + dv / 2))
    throw std::out_of_range("cut velocity " + fmt(velocity) + " m/s outside the Doppler axis");

  Scenario sc = sample_scenario(scenario_seed, cfg.ranges);
  if (place_object) {
    sc.objects.at(0).distance = distance;
    sc.objects.at(0).velocity = velocity;
  }
  const IfFrame frame = assemble_frame(sc, cfg.radar);
  const Cell cell = object_cell(ObjectParams{distance, velocity, 0.0, 1.0}, cfg.radar);

  CutTables t;
  t.range_bin = cell.first;
  t.doppler_bin = cell.second;
  std::vector<Matrix<double>> db;
  for (const auto& m : methods) {
    const auto map = method_rd_maps(m, frame, cfg).at(0);
    double peak = 0.0;
    for (const auto& z : map.values.data()) peak = std::max(peak, std::abs(z));
    Matrix<double> out(map.n_bins(), map.m_bins());
    for (std::size_t i = 0; i < out.size(); ++i)
      out.data()[i] = 20.0 * std::log10(std::abs(map.values.data()[i]) / peak + kLmsFloor);
    db.push_back(std::move(out));
  }
  std::ostringstream rs, vs;
  rs << "distance_m";
  vs << "velocity_m_s";
  for (const auto& m : methods) {
    rs << ',' << m.name;
    vs << ',' << m.name;
  }
  rs << '\n';
  vs << '\n';
  for (std::size_t n = 0; n < d_axis.size(); ++n) {
    rs << fmt(d_axis[n]);
    for (const auto& d : db) rs << ',' << fmt(d(n, t.doppler_bin));
    rs << '\n';
  }
  for (std::size_t k = 0; k < v_axis.size(); ++k) {
    vs << fmt(v_axis[k]);
    for (const auto& d : db) vs << ',' << fmt(d(t.range_bin, k));
    vs << '\n';
  }
  t.range_csv = rs.str();
  t.velocity_csv = vs.str();
  return t;
}

CutTables cmd_cuts(const RunConfig& cfg, std::uint64_t scenario_seed, const std::vector<MethodSpec>& methods,
                   double distance, double velocity, const std::string& out_dir, bool place_object) {
  std::vector<std::unique_ptr<DenoiserModel>> owned;
  std::vector<MethodSpec> resolved = methods;
  for (auto& m : resolved) {
    if (m.name.starts_with(kCnnPrefix) && !m.model) {
      owned.push_back(std::make_unique<DenoiserModel>(load_checkpoint(m.checkpoint)));
      m.model = owned.back().get();
    }
  }
  CutTables t = compute_cuts(cfg, scenario_seed, resolved, distance, velocity, place_object);
  fs::create_directories(out_dir);
  write_file_atomic(join(out_dir, "range_cut.csv"), t.range_csv);
  write_file_atomic(join(out_dir, "velocity_cut.csv"), t.velocity_csv);
  return t;
}

std::vector<ModelSpec> SweepGrid::specs() const {
  std::vector<ModelSpec> out;
  for (auto l : layers)
    for (auto k : kernels)
      for (auto [s1, s2] : kernel_sizes) {
        ModelSpec s{variant, repr, l, k, variant == Variant::Rpd ? 1 : s1, s2};
        s.validate();
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
      }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const DatasetBundle& data, const RunConfig& cfg,
                                std::size_t jobs) {
  const auto seeds = data.test.scenario_seeds();
  std::vector<SweepRow> rows;
  for (const auto& spec : grid.specs()) {
    TrainResult tr = train(build_model(spec, cfg.training.seed), data.train, data.val, cfg.training);
    const MethodSpec method{"cnn:" + spec.label(), "", &tr.model};
    const MetricsReport report = run_eval(cfg, seeds, {method}, jobs);
    rows.push_back({spec, param_count(spec), report.summary(method.name), tr.best_val_loss});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.metrics.mean_sinr_rd_db != b.metrics.mean_sinr_rd_db)
      return a.metrics.mean_sinr_rd_db > b.metrics.mean_sinr_rd_db;
    return a.params < b.params;
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "rank,model,variant,repr,layers,kernels,s1,s2,params,sinr_rd_db,evm_rd,sinr_as_db,std_sinr_rd_db,"
        "best_val_loss\n";
  std::size_t rank = 1;
  for (const auto& r : rows) {
    const auto& s = r.spec;
    os << rank++ << ',' << s.label() << ',' << to_string(s.variant) << ',' << to_string(s.repr) << ',' << s.layers
       << ',' << s.kernels << ',' << s.s1 << ',' << s.s2 << ',' << r.params << ',' << fmt(r.metrics.mean_sinr_rd_db)
       << ',' << fmt(r.metrics.mean_evm_rd) << ',' << fmt(r.metrics.mean_sinr_as_db) << ','
       << fmt(r.metrics.std_sinr_rd_db) << ',' << fmt(r.best_val_loss) << '\n';
  }
  return os.str();
}

void cmd_sweep(const std::string& dataset_dir, const SweepGrid& grid, const TrainingConfig& tcfg, std::size_t jobs,
               const std::string& out_csv) {
  RunConfig cfg = load_dataset_config(dataset_dir);
  cfg.training = tcfg;
  const DatasetBundle data = load_dataset_bundle(dataset_dir);
  SweepGrid g = grid;
  g.variant = data.train.header.variant;
  g.repr = data.train.header.repr;
  const auto rows = run_sweep(g, data, cfg, jobs);
  const fs::path parent = fs::path(out_csv).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  write_file_atomic(out_csv, sweep_csv(rows));
}

}  // namespace rmi
