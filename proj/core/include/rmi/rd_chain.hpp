#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rmi/config.hpp"
#include "rmi/sim.hpp"
#include "rmi/types.hpp"

namespace rmi {

enum class Stage { RangeProfile, RangeDoppler };

/// Range profile S_R (rows = range bins, cols = ramps) or range-Doppler map
/// S_RD (rows = range bins, cols = centered Doppler bins) of one antenna.
struct SpectrumMatrix {
  Matrix<cplx> values;
  Stage stage = Stage::RangeProfile;
  std::size_t antenna = 0;
  std::vector<double> distance_axis;  ///< m per row
  std::vector<double> velocity_axis;  ///< m/s per column (RangeDoppler only)

  std::size_t n_bins() const { return values.rows(); }
  std::size_t m_bins() const { return values.cols(); }
};

struct AngularSpectrum {
  std::vector<cplx> values;
  std::pair<std::size_t, std::size_t> source_peak{0, 0};
};

/// Periodic Hann window, w[k] = 0.5 (1 - cos(2 pi k / L)).
std::vector<double> hann_window(std::size_t length);

std::vector<double> distance_axis(const VictimRadarConfig& cfg);
/// Velocity of centered Doppler bins -M/2 .. M/2-1.
std::vector<double> velocity_axis(const VictimRadarConfig& cfg);

/// Windowed fast-time DFT of every ramp; one matrix per antenna.
std::vector<SpectrumMatrix> range_dft(const Cube& samples, const VictimRadarConfig& cfg);
std::vector<SpectrumMatrix> range_dft(const IfFrame& frame);

/// Windowed slow-time DFT per range bin, fftshifted so column M/2 is v = 0.
SpectrumMatrix doppler_dft(const SpectrumMatrix& rp, const VictimRadarConfig& cfg);
std::vector<SpectrumMatrix> doppler_dft(const std::vector<SpectrumMatrix>& rps,
                                        const VictimRadarConfig& cfg);

/// range_dft followed by doppler_dft on every antenna.
std::vector<SpectrumMatrix> rd_maps(const Cube& samples, const VictimRadarConfig& cfg);

/// Hann-weighted, zero-padded DFT across antennas of the RD cell `peak`,
/// fftshifted so bin n_as/2 is broadside.
AngularSpectrum angular_spectrum(const std::vector<SpectrumMatrix>& rd_per_antenna,
                                 std::pair<std::size_t, std::size_t> peak,
                                 std::size_t n_as = 64);

/// AS bin nearest to an azimuth (steering phase pi sin(theta) per element).
std::size_t angular_bin(double azimuth, std::size_t n_as);

}  // namespace rmi
