#include "rmi/config.hpp"

#include <json.hpp>

#include <bit>
#include <stdexcept>

#include "rmi/io.hpp"
#include "rmi/numeric.hpp"

namespace rmi {

using nlohmann::json;

namespace {

bool is_pow2(std::size_t v) { return v != 0 && std::has_single_bit(v); }

void check_range(const RealRange& r, const char* name) {
  if (!(r.min <= r.max)) throw std::invalid_argument(std::string("invalid range: ") + name + " (min > max)");
}

void check_range(const CountRange& r, const char* name) {
  if (r.min > r.max) throw std::invalid_argument(std::string("invalid range: ") + name + " (min > max)");
}

}  // namespace

void VictimRadarConfig::validate() const {
  if (!(f0_v > 0 && bw_v > 0 && t_v > 0 && b_if > 0))
    throw std::invalid_argument("radar config: frequencies and durations must be positive");
  if (!is_pow2(n_fast) || !is_pow2(m_slow))
    throw std::invalid_argument("radar config: n_fast and m_slow must be powers of two");
  if (n_ant == 0) throw std::invalid_argument("radar config: n_ant must be positive");
}

double VictimRadarConfig::wavelength() const { return kSpeedOfLight / f0_v; }
double VictimRadarConfig::range_resolution() const { return kSpeedOfLight / (2.0 * bw_v); }
double VictimRadarConfig::velocity_resolution() const {
  return wavelength() / (2.0 * static_cast<double>(m_slow) * t_v);
}
double VictimRadarConfig::max_unambiguous_range() const {
  return static_cast<double>(n_fast) * range_resolution();
}

void ScenarioRanges::validate() const {
  check_range(n_objects, "n_objects");
  check_range(distance, "distance");
  check_range(velocity, "velocity");
  check_range(azimuth, "azimuth");
  check_range(n_interferers, "n_interferers");
  check_range(f0_i, "f0_i");
  check_range(bw_i, "bw_i");
  check_range(t_i, "t_i");
  check_range(interferer_azimuth, "interferer_azimuth");
  check_range(sir_db, "sir_db");
  check_range(snr_db, "snr_db");
}

void ImatParams::validate() const {
  if (max_iter < 1) throw std::invalid_argument("imat: max_iter must be >= 1");
  if (!(threshold_decay > 0.0 && threshold_decay < 1.0))
    throw std::invalid_argument("imat: threshold_decay must lie in (0, 1)");
  if (!(stop_tol >= 0.0)) throw std::invalid_argument("imat: stop_tol must be >= 0");
}

RunConfig default_run_config() { return RunConfig{}; }

// Desk scale: the full-size chirp slope, sampling rate and IF bandwidth on a
// quarter of the sweep (250 MHz in 12 us), so 256 range bins span ~153 m.
RunConfig desk_run_config() {
  RunConfig c;
  c.radar.n_fast = 256;
  c.radar.m_slow = 64;
  c.radar.bw_v = 250e6;
  c.radar.t_v = 12e-6;
  c.sizes = {200, 25, 25};
  return c;
}

RunConfig run_config_for(Scale scale) {
  return scale == Scale::Desk ? desk_run_config() : default_run_config();
}

Scale parse_scale(const std::string& s) {
  if (s == "full") return Scale::Full;
  if (s == "desk") return Scale::Desk;
  throw std::invalid_argument("unknown scale '" + s + "' (expected full or desk)");
}

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::Mse: return "mse";
    case LossKind::Sinr: return "sinr";
    case LossKind::WeightedMse: return "wmse";
  }
  return "?";
}

std::string to_string(ScalerKind k) { return k == ScalerKind::Css ? "css" : "zmuvs"; }

LossKind parse_loss(const std::string& s) {
  if (s == "mse") return LossKind::Mse;
  if (s == "sinr") return LossKind::Sinr;
  if (s == "wmse" || s == "weighted-mse") return LossKind::WeightedMse;
  throw std::invalid_argument("unknown loss '" + s + "' (expected mse, sinr, wmse)");
}

ScalerKind parse_scaler(const std::string& s) {
  if (s == "css") return ScalerKind::Css;
  if (s == "zmuvs") return ScalerKind::Zmuvs;
  throw std::invalid_argument("unknown scaler '" + s + "' (expected css, zmuvs)");
}

namespace {

json range_json(const RealRange& r) { return json::array({r.min, r.max}); }
json range_json(const CountRange& r) { return json::array({r.min, r.max}); }

template <class R>
void read_range(const json& j, const char* key, R& r) {
  if (!j.contains(key)) return;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2) throw std::invalid_argument(std::string("config: ") + key + " must be [min, max]");
  a.at(0).get_to(r.min);
  a.at(1).get_to(r.max);
}

template <class T>
void read(const json& j, const char* key, T& v) {
  if (j.contains(key)) j.at(key).get_to(v);
}

}  // namespace

std::string to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["radar"] = {{"f0_hz", c.radar.f0_v},         {"bandwidth_hz", c.radar.bw_v},
                {"sweep_s", c.radar.t_v},        {"if_bandwidth_hz", c.radar.b_if},
                {"n_fast", c.radar.n_fast},      {"m_slow", c.radar.m_slow},
                {"n_ant", c.radar.n_ant},        {"window", "hann"}};
  const auto& r = c.ranges;
  j["ranges"] = {{"n_objects", range_json(r.n_objects)},
                 {"distance_m", range_json(r.distance)},
                 {"velocity_m_s", range_json(r.velocity)},
                 {"azimuth_rad", range_json(r.azimuth)},
                 {"n_interferers", range_json(r.n_interferers)},
                 {"f0_i_hz", range_json(r.f0_i)},
                 {"bw_i_hz", range_json(r.bw_i)},
                 {"t_i_s", range_json(r.t_i)},
                 {"interferer_azimuth_rad", range_json(r.interferer_azimuth)},
                 {"sir_db", range_json(r.sir_db)},
                 {"snr_db", range_json(r.snr_db)}};
  j["imat"] = {{"max_iter", c.imat.max_iter},
               {"threshold_decay", c.imat.threshold_decay},
               {"stop_tol", c.imat.stop_tol}};
  j["metrics"] = {{"guard_range", c.metrics.guard_range},
                  {"guard_doppler", c.metrics.guard_doppler},
                  {"n_as", c.metrics.n_as},
                  {"guard_as", c.metrics.guard_as},
                  {"evm_reference", c.metrics.evm_reference == EvmReference::Noisy ? "noisy" : "object"}};
  j["dataset"] = {{"train", c.sizes.train},
                  {"val", c.sizes.val},
                  {"test", c.sizes.test},
                  {"max_train_interferers", c.max_train_interferers}};
  const auto& t = c.training;
  j["training"] = {{"lr", t.lr},
                   {"batch_size", t.batch_size},
                   {"max_epochs", t.max_epochs},
                   {"patience", t.patience},
                   {"max_steps_per_epoch", t.max_steps_per_epoch},
                   {"loss", to_string(t.loss)},
                   {"scaler", to_string(t.scaler)},
                   {"weights", json::array({t.w_full, t.w_mag, t.w_phase})},
                   {"seed", t.seed}};
  return j.dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text, const RunConfig& base) {
  RunConfig c = base;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  try {
    read(j, "seed", c.seed);
    if (j.contains("radar")) {
      const auto& r = j.at("radar");
      read(r, "f0_hz", c.radar.f0_v);
      read(r, "bandwidth_hz", c.radar.bw_v);
      read(r, "sweep_s", c.radar.t_v);
      read(r, "if_bandwidth_hz", c.radar.b_if);
      read(r, "n_fast", c.radar.n_fast);
      read(r, "m_slow", c.radar.m_slow);
      read(r, "n_ant", c.radar.n_ant);
      if (r.contains("window") && r.at("window").get<std::string>() != "hann")
        throw std::invalid_argument("config: only the hann window is supported");
    }
    if (j.contains("ranges")) {
      const auto& r = j.at("ranges");
      auto& d = c.ranges;
      read_range(r, "n_objects", d.n_objects);
      read_range(r, "distance_m", d.distance);
      read_range(r, "velocity_m_s", d.velocity);
      read_range(r, "azimuth_rad", d.azimuth);
      read_range(r, "n_interferers", d.n_interferers);
      read_range(r, "f0_i_hz", d.f0_i);
      read_range(r, "bw_i_hz", d.bw_i);
      read_range(r, "t_i_s", d.t_i);
      read_range(r, "interferer_azimuth_rad", d.interferer_azimuth);
      read_range(r, "sir_db", d.sir_db);
      read_range(r, "snr_db", d.snr_db);
    }
    if (j.contains("imat")) {
      const auto& r = j.at("imat");
      read(r, "max_iter", c.imat.max_iter);
      read(r, "threshold_decay", c.imat.threshold_decay);
      read(r, "stop_tol", c.imat.stop_tol);
    }
    if (j.contains("metrics")) {
      const auto& r = j.at("metrics");
      read(r, "guard_range", c.metrics.guard_range);
      read(r, "guard_doppler", c.metrics.guard_doppler);
      read(r, "n_as", c.metrics.n_as);
      read(r, "guard_as", c.metrics.guard_as);
      if (r.contains("evm_reference")) {
        const auto s = r.at("evm_reference").get<std::string>();
        if (s == "noisy") c.metrics.evm_reference = EvmReference::Noisy;
        else if (s == "object") c.metrics.evm_reference = EvmReference::ObjectOnly;
        else throw std::invalid_argument("config: evm_reference must be noisy or object");
      }
    }
    if (j.contains("dataset")) {
      const auto& r = j.at("dataset");
      read(r, "train", c.sizes.train);
      read(r, "val", c.sizes.val);
      read(r, "test", c.sizes.test);
      read(r, "max_train_interferers", c.max_train_interferers);
    }
    if (j.contains("training")) {
      const auto& r = j.at("training");
      auto& t = c.training;
      read(r, "lr", t.lr);
      read(r, "batch_size", t.batch_size);
      read(r, "max_epochs", t.max_epochs);
      read(r, "patience", t.patience);
      read(r, "max_steps_per_epoch", t.max_steps_per_epoch);
      read(r, "seed", t.seed);
      if (r.contains("loss")) t.loss = parse_loss(r.at("loss").get<std::string>());
      if (r.contains("scaler")) t.scaler = parse_scaler(r.at("scaler").get<std::string>());
      if (r.contains("weights")) {
        const auto& w = r.at("weights");
        if (!w.is_array() || w.size() != 3) throw std::invalid_argument("config: weights must have 3 entries");
        t.w_full = w.at(0).get<double>();
        t.w_mag = w.at(1).get<double>();
        t.w_phase = w.at(2).get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.radar.validate();
  c.ranges.validate();
  c.imat.validate();
  return c;
}

RunConfig load_run_config(const std::string& path, const RunConfig& base) {
  return run_config_from_json(read_text_file(path), base);
}

}  // namespace rmi
