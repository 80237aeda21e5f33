#include "rmi/rd_chain.hpp"

#include <cmath>
#include <stdexcept>

#include "rmi/fft.hpp"
#include "rmi/numeric.hpp"

namespace rmi {

std::vector<double> hann_window(std::size_t length) {
  if (length == 0) throw std::invalid_argument("hann_window: zero length");
  std::vector<double> w(length);
  const double L = static_cast<double>(length);
  for (std::size_t k = 0; k < length; ++k) w[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(k) / L));
  return w;
}

std::vector<double> distance_axis(const VictimRadarConfig& cfg) {
  std::vector<double> d(cfg.n_fast);
  for (std::size_t n = 0; n < cfg.n_fast; ++n) d[n] = static_cast<double>(n) * cfg.range_resolution();
  return d;
}

std::vector<double> velocity_axis(const VictimRadarConfig& cfg) {
  std::vector<double> v(cfg.m_slow);
  const auto half = static_cast<std::ptrdiff_t>(cfg.m_slow / 2);
  for (std::size_t m = 0; m < cfg.m_slow; ++m)
    v[m] = static_cast<double>(static_cast<std::ptrdiff_t>(m) - half) * cfg.velocity_resolution();
  return v;
}

std::vector<SpectrumMatrix> range_dft(const Cube& samples, const VictimRadarConfig& cfg) {
  if (samples.n_fast() != cfg.n_fast || samples.m_slow() != cfg.m_slow || samples.n_ant() != cfg.n_ant)
    throw std::invalid_argument("range_dft: cube dimensions do not match config");
  const std::size_t N = cfg.n_fast, M = cfg.m_slow;
  const auto win = hann_window(N);
  const auto daxis = distance_axis(cfg);

  std::vector<SpectrumMatrix> out(cfg.n_ant);
  std::vector<cplx> buf(N);
  for (std::size_t a = 0; a < cfg.n_ant; ++a) {
    auto& sm = out[a];
    sm.values = Matrix<cplx>(N, M);
    sm.stage = Stage::RangeProfile;
    sm.antenna = a;
    sm.distance_axis = daxis;
    for (std::size_t m = 0; m < M; ++m) {
      const auto ramp = samples.ramp(m, a);
      for (std::size_t n = 0; n < N; ++n) buf[n] = ramp[n] * win[n];
      fft_inplace(buf);
      for (std::size_t n = 0; n < N; ++n) sm.values(n, m) = buf[n];
    }
  }
  return out;
}

std::vector<SpectrumMatrix> range_dft(const IfFrame& frame) { return range_dft(frame.samples, frame.cfg); }

SpectrumMatrix doppler_dft(const SpectrumMatrix& rp, const VictimRadarConfig& cfg) {
  if (rp.stage != Stage::RangeProfile) throw std::invalid_argument("doppler_dft: expected a range profile");
  const std::size_t N = rp.n_bins(), M = rp.m_bins();
  const auto win = hann_window(M);

  SpectrumMatrix out;
  out.values = Matrix<cplx>(N, M);
  out.stage = Stage::RangeDoppler;
  out.antenna = rp.antenna;
  out.distance_axis = rp.distance_axis;
  out.velocity_axis = velocity_axis(cfg);
  if (out.velocity_axis.size() != M) throw std::invalid_argument("doppler_dft: ramp count does not match config");

  std::vector<cplx> buf(M);
  for (std::size_t n = 0; n < N; ++n) {
    const auto row = rp.values.row(n);
    for (std::size_t m = 0; m < M; ++m) buf[m] = row[m] * win[m];
    fft_inplace(buf);
    fftshift(buf);
    std::copy(buf.begin(), buf.end(), out.values.row(n).begin());
  }
  return out;
}

std::vector<SpectrumMatrix> doppler_dft(const std::vector<SpectrumMatrix>& rps, const VictimRadarConfig& cfg) {
  std::vector<SpectrumMatrix> out;
  out.reserve(rps.size());
  for (const auto& rp : rps) out.push_back(doppler_dft(rp, cfg));
  return out;
}

std::vector<SpectrumMatrix> rd_maps(const Cube& samples, const VictimRadarConfig& cfg) {
  return doppler_dft(range_dft(samples, cfg), cfg);
}

AngularSpectrum angular_spectrum(const std::vector<SpectrumMatrix>& rd_per_antenna,
                                 std::pair<std::size_t, std::size_t> peak, std::size_t n_as) {
  const std::size_t A = rd_per_antenna.size();
  if (A == 0) throw std::invalid_argument("angular_spectrum: no antennas");
  if (n_as < A) throw std::invalid_argument("angular_spectrum: n_as smaller than antenna count");
  for (const auto& rd : rd_per_antenna)
    if (peak.first >= rd.n_bins() || peak.second >= rd.m_bins())
      throw std::out_of_range("angular_spectrum: peak outside the map");

  const auto win = hann_window(A);
  AngularSpectrum as;
  as.source_peak = peak;
  as.values.assign(n_as, cplx{});
  for (std::size_t a = 0; a < A; ++a) as.values[a] = rd_per_antenna[a].values(peak.first, peak.second) * win[a];
  fft_inplace(as.values);
  fftshift(as.values);
  return as;
}

std::size_t angular_bin(double azimuth, std::size_t n_as) {
  // exp(j pi a sin(theta)) peaks at DFT index n_as sin(theta) / 2.
  const auto offset = static_cast<std::ptrdiff_t>(std::lround(static_cast<double>(n_as) * std::sin(azimuth) / 2.0));
  const auto n = static_cast<std::ptrdiff_t>(n_as);
  return static_cast<std::size_t>(((n / 2 + offset) % n + n) % n);
}

}  // namespace rmi
