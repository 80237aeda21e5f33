#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "rmi/config.hpp"
#include "rmi/types.hpp"

namespace rmi {

struct ObjectParams {
  double distance = 0.0;  // m
  double velocity = 0.0;  // m/s, positive = positive Doppler shift
  double azimuth = 0.0;   // rad
  double amplitude = 1.0;
};

struct InterfererParams {
  double f0_i = 76e9;
  double bw_i = 1e9;
  double t_i = 48e-6;
  double phase_offset = 0.0;  // rad
  double time_offset = 0.0;   // s, start of the interferer's first ramp
  double azimuth = 0.0;       // rad, sets the per-antenna phase progression
};

/// One random radar frame. sir_db/snr_db of +infinity disable the interference
/// or noise term.
struct Scenario {
  std::vector<ObjectParams> objects;
  std::vector<InterfererParams> interferers;
  double sir_db = std::numeric_limits<double>::infinity();
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

struct IfFrame {
  VictimRadarConfig cfg;
  Scenario scenario;
  Cube samples;         ///< objects + interference + noise
  Cube clean_samples;   ///< objects + noise (interference omitted)
  Cube object_samples;  ///< objects only
  Mask interference_mask;  ///< n_fast x m_slow, common to all antennas
};

/// Draws every field independently and uniformly from `ranges`.
Scenario sample_scenario(std::uint64_t seed, const ScenarioRanges& ranges);

/// Sum of the beat-signal components of one object on all antennas.
Cube synth_object_component(const ObjectParams& obj, const VictimRadarConfig& cfg);

struct InterferenceComponent {
  Cube samples;
  Mask mask;
};

/// Baseband interference seen by the victim receiver: nonzero only while the
/// interferer's instantaneous frequency lies within the IF bandwidth of the
/// victim's.
InterferenceComponent synth_interference_component(const InterfererParams& intf,
                                                   const VictimRadarConfig& cfg);

IfFrame assemble_frame(const Scenario& scenario, const VictimRadarConfig& cfg);

}  // namespace rmi
