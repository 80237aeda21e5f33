#include "rmi/sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rmi/numeric.hpp"
#include "rmi/rng.hpp"

namespace rmi {

Scenario sample_scenario(std::uint64_t seed, const ScenarioRanges& ranges) {
  ranges.validate();
  Rng rng(seed);
  Scenario s;
  s.seed = seed;
  const std::size_t n_obj = rng.uniform_count(ranges.n_objects.min, ranges.n_objects.max);
  s.objects.reserve(n_obj);
  for (std::size_t o = 0; o < n_obj; ++o) {
    ObjectParams p;
    p.distance = rng.uniform(ranges.distance.min, ranges.distance.max);
    p.velocity = rng.uniform(ranges.velocity.min, ranges.velocity.max);
    p.azimuth = rng.uniform(ranges.azimuth.min, ranges.azimuth.max);
    p.amplitude = 1.0;
    s.objects.push_back(p);
  }
  const std::size_t n_int = rng.uniform_count(ranges.n_interferers.min, ranges.n_interferers.max);
  s.interferers.reserve(n_int);
  for (std::size_t i = 0; i < n_int; ++i) {
    InterfererParams p;
    p.f0_i = rng.uniform(ranges.f0_i.min, ranges.f0_i.max);
    p.bw_i = rng.uniform(ranges.bw_i.min, ranges.bw_i.max);
    p.t_i = rng.uniform(ranges.t_i.min, ranges.t_i.max);
    p.phase_offset = rng.uniform(0.0, 2.0 * kPi);
    p.time_offset = rng.uniform(0.0, p.t_i);
    p.azimuth = rng.uniform(ranges.interferer_azimuth.min, ranges.interferer_azimuth.max);
    s.interferers.push_back(p);
  }
  s.sir_db = rng.uniform(ranges.sir_db.min, ranges.sir_db.max);
  s.snr_db = rng.uniform(ranges.snr_db.min, ranges.snr_db.max);
  return s;
}

namespace {

double frac(double x) { return x - std::floor(x); }

}  // namespace

Cube synth_object_component(const ObjectParams& obj, const VictimRadarConfig& cfg) {
  cfg.validate();
  if (obj.distance < 0.0 || obj.distance >= cfg.max_unambiguous_range())
    throw std::invalid_argument("object distance outside the unambiguous range");

  const std::size_t N = cfg.n_fast, M = cfg.m_slow, A = cfg.n_ant;
  const double lambda = cfg.wavelength();
  // Beat frequency over sampling rate equals (d / range bin) / N cycles per sample.
  const double fast_cycles = obj.distance / cfg.range_resolution() / static_cast<double>(N);
  const double slow_cycles = 2.0 * obj.velocity / lambda * cfg.t_v;
  const double ant_cycles = cfg.antenna_spacing() / lambda * std::sin(obj.azimuth);
  const double carrier_cycles = frac(2.0 * obj.distance / lambda);

  std::vector<cplx> ef(N), es(M), ea(A);
  for (std::size_t n = 0; n < N; ++n) ef[n] = std::polar(1.0, 2.0 * kPi * frac(fast_cycles * static_cast<double>(n)));
  for (std::size_t m = 0; m < M; ++m) es[m] = std::polar(1.0, 2.0 * kPi * frac(slow_cycles * static_cast<double>(m)));
  for (std::size_t a = 0; a < A; ++a) ea[a] = std::polar(1.0, 2.0 * kPi * frac(ant_cycles * static_cast<double>(a)));
  const cplx c0 = std::polar(obj.amplitude, 2.0 * kPi * carrier_cycles);

  Cube out(N, M, A);
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t m = 0; m < M; ++m) {
      const cplx g = c0 * ea[a] * es[m];
      auto ramp = out.ramp(m, a);
      for (std::size_t n = 0; n < N; ++n) ramp[n] = g * ef[n];
    }
  }
  return out;
}

InterferenceComponent synth_interference_component(const InterfererParams& intf,
                                                   const VictimRadarConfig& cfg) {
  cfg.validate();
  if (!(intf.t_i > 0.0 && intf.bw_i > 0.0)) throw std::invalid_argument("interferer: bw and t must be positive");

  const std::size_t N = cfg.n_fast, M = cfg.m_slow, A = cfg.n_ant;
  const double fs = cfg.sample_rate();
  const double k_v = cfg.chirp_slope();
  const double k_i = intf.bw_i / intf.t_i;
  const double df0 = intf.f0_i - cfg.f0_v;
  const double ant_cycles = cfg.antenna_spacing() / cfg.wavelength() * std::sin(intf.azimuth);

  InterferenceComponent out{Cube(N, M, A), Mask(N, M, 0)};
  std::vector<cplx> ea(A);
  for (std::size_t a = 0; a < A; ++a) ea[a] = std::polar(1.0, 2.0 * kPi * frac(ant_cycles * static_cast<double>(a)));

  for (std::size_t m = 0; m < M; ++m) {
    const double ramp_start = static_cast<double>(m) * cfg.t_v;
    for (std::size_t n = 0; n < N; ++n) {
      const double tau = static_cast<double>(n) / fs;
      const double rel = ramp_start + tau - intf.time_offset;
      // Small bias keeps exact ramp boundaries from rounding into the previous ramp.
      const double j = std::floor(rel / intf.t_i + 1e-9);
      const double tau_i = rel - j * intf.t_i;
      const double dfreq = df0 + k_i * tau_i - k_v * tau;
      if (std::abs(dfreq) >= cfg.b_if) continue;

      // Phase difference of interferer and victim oscillators, in cycles, with
      // the carrier term reduced modulo one before it meets the small terms.
      const double carrier = frac(cfg.f0_v * (ramp_start - intf.time_offset - j * intf.t_i));
      const double cycles = carrier + df0 * tau_i + 0.5 * k_i * tau_i * tau_i - 0.5 * k_v * tau * tau;
      const cplx v = std::polar(1.0, 2.0 * kPi * frac(cycles) + intf.phase_offset);
      out.mask(n, m) = 1;
      for (std::size_t a = 0; a < A; ++a) out.samples(n, m, a) = v * ea[a];
    }
  }
  return out;
}

IfFrame assemble_frame(const Scenario& scenario, const VictimRadarConfig& cfg) {
  cfg.validate();
  const std::size_t N = cfg.n_fast, M = cfg.m_slow, A = cfg.n_ant;

  IfFrame f;
  f.cfg = cfg;
  f.scenario = scenario;
  f.object_samples = Cube(N, M, A);
  for (const auto& obj : scenario.objects) f.object_samples += synth_object_component(obj, cfg);

  const double p_obj = mean_power(f.object_samples.data());
  if (!(p_obj > 0.0)) throw std::invalid_argument("assemble_frame: zero object power");

  f.clean_samples = f.object_samples;
  if (std::isfinite(scenario.snr_db)) {
    const double sigma = std::sqrt(p_obj / from_db10(scenario.snr_db) / 2.0);
    Rng rng(noise_seed(scenario.seed));
    for (auto& v : f.clean_samples.data()) {
      const double re = rng.normal();
      const double im = rng.normal();
      v += cplx(sigma * re, sigma * im);
    }
  }

  f.samples = f.clean_samples;
  f.interference_mask = Mask(N, M, 0);
  if (std::isfinite(scenario.sir_db) && !scenario.interferers.empty()) {
    Cube interference(N, M, A);
    for (const auto& intf : scenario.interferers) {
      auto comp = synth_interference_component(intf, cfg);
      interference += comp.samples;
      for (std::size_t i = 0; i < comp.mask.size(); ++i) f.interference_mask.data()[i] |= comp.mask.data()[i];
    }
    const double p_int = mean_power(interference.data());
    if (p_int > 0.0) {
      // SIR is object power over interference power.
      interference *= std::sqrt(p_obj / from_db10(scenario.sir_db) / p_int);
      auto& s = f.samples.data();
      const auto& iv = interference.data();
      for (std::size_t i = 0; i < s.size(); ++i)
        if (iv[i] != cplx{}) s[i] += iv[i];
    }
  }
  return f;
}

}  // namespace rmi
