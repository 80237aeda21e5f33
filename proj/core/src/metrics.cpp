#include "rmi/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rmi/numeric.hpp"

namespace rmi {

namespace {

std::size_t wrap_index(std::ptrdiff_t i, std::size_t n) {
  const auto s = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % s) + s) % s);
}

// Bins are circular in both axes (DFT periodicity).
std::size_t circular_distance(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

double mean_cell_power(const Matrix<cplx>& map, const std::vector<Cell>& cells) {
  std::vector<double> p;
  p.reserve(cells.size());
  for (const auto& [r, d] : cells) p.push_back(std::norm(map(r, d)));
  return pairwise_sum(std::span<const double>(p)) / static_cast<double>(p.size());
}

void check_cells(const Matrix<cplx>& map, const CellSets& cells) {
  if (cells.peak_cells.empty()) throw std::invalid_argument("metrics: no peak cells");
  for (const auto* set : {&cells.peak_cells, &cells.noise_cells})
    for (const auto& [r, d] : *set)
      if (r >= map.rows() || d >= map.cols()) throw std::out_of_range("metrics: cell outside the map");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Cell object_cell(const ObjectParams& obj, const VictimRadarConfig& cfg) {
  const auto r = static_cast<std::ptrdiff_t>(std::lround(obj.distance / cfg.range_resolution()));
  const auto d = static_cast<std::ptrdiff_t>(cfg.m_slow / 2) +
                 static_cast<std::ptrdiff_t>(std::lround(obj.velocity / cfg.velocity_resolution()));
  return {wrap_index(r, cfg.n_fast), wrap_index(d, cfg.m_slow)};
}

CellSets cell_sets_from_peaks(std::vector<Cell> peaks, std::size_t n_bins, std::size_t m_bins,
                              std::size_t guard_range, std::size_t guard_doppler) {
  if (guard_range < 1 || guard_doppler < 1) throw std::invalid_argument("cell_sets: guard must be >= (1, 1)");
  CellSets cs;
  cs.guard_range = guard_range;
  cs.guard_doppler = guard_doppler;
  cs.n_bins = n_bins;
  cs.m_bins = m_bins;
  for (const auto& p : peaks)
    if (std::find(cs.peak_cells.begin(), cs.peak_cells.end(), p) == cs.peak_cells.end()) cs.peak_cells.push_back(p);

  Matrix<std::uint8_t> excluded(n_bins, m_bins, 0);
  const auto gr = static_cast<std::ptrdiff_t>(std::min(guard_range, n_bins / 2));
  const auto gd = static_cast<std::ptrdiff_t>(std::min(guard_doppler, m_bins / 2));
  for (const auto& [r, d] : cs.peak_cells)
    for (std::ptrdiff_t dr = -gr; dr <= gr; ++dr)
      for (std::ptrdiff_t dd = -gd; dd <= gd; ++dd)
        excluded(wrap_index(static_cast<std::ptrdiff_t>(r) + dr, n_bins),
                 wrap_index(static_cast<std::ptrdiff_t>(d) + dd, m_bins)) = 1;
  for (std::size_t r = 0; r < n_bins; ++r)
    for (std::size_t d = 0; d < m_bins; ++d)
      if (!excluded(r, d)) cs.noise_cells.emplace_back(r, d);
  return cs;
}

CellSets cell_sets(const Scenario& scenario, const VictimRadarConfig& cfg, std::size_t guard_range,
                   std::size_t guard_doppler) {
  std::vector<Cell> peaks;
  peaks.reserve(scenario.objects.size());
  for (const auto& obj : scenario.objects) peaks.push_back(object_cell(obj, cfg));
  return cell_sets_from_peaks(std::move(peaks), cfg.n_fast, cfg.m_slow, guard_range, guard_doppler);
}

double sinr_rd(const Matrix<cplx>& map, const CellSets& cells) {
  check_cells(map, cells);
  if (cells.noise_cells.empty()) throw std::invalid_argument("sinr_rd: no noise cells");
  const double signal = mean_cell_power(map, cells.peak_cells);
  const double noise = mean_cell_power(map, cells.noise_cells);
  if (noise == 0.0) return kInfSinr;
  return db10(signal / noise);
}

double sinr_rd(const SpectrumMatrix& map, const CellSets& cells) { return sinr_rd(map.values, cells); }

double evm_rd(const Matrix<cplx>& clean, const Matrix<cplx>& denoised, const CellSets& cells) {
  if (clean.rows() != denoised.rows() || clean.cols() != denoised.cols())
    throw std::invalid_argument("evm_rd: dimension mismatch");
  check_cells(clean, cells);
  std::vector<double> terms;
  terms.reserve(cells.peak_cells.size());
  for (const auto& [r, d] : cells.peak_cells) {
    const double ref = std::abs(clean(r, d));
    if (ref == 0.0) throw std::invalid_argument("evm_rd: zero clean peak magnitude");
    terms.push_back(std::abs(clean(r, d) - denoised(r, d)) / ref);
  }
  return pairwise_sum(std::span<const double>(terms)) / static_cast<double>(terms.size());
}

double evm_rd(const SpectrumMatrix& clean, const SpectrumMatrix& denoised, const CellSets& cells) {
  return evm_rd(clean.values, denoised.values, cells);
}

double sinr_as(const AngularSpectrum& as, std::size_t peak_bin, std::size_t guard) {
  const std::size_t n = as.values.size();
  if (peak_bin >= n) throw std::out_of_range("sinr_as: peak bin outside the spectrum");
  std::vector<double> noise;
  for (std::size_t k = 0; k < n; ++k)
    if (circular_distance(k, peak_bin, n) > guard) noise.push_back(std::norm(as.values[k]));
  if (noise.empty()) throw std::invalid_argument("sinr_as: guard leaves no noise bins");
  const double pn = pairwise_sum(std::span<const double>(noise)) / static_cast<double>(noise.size());
  if (pn == 0.0) return kInfSinr;
  return db10(std::norm(as.values[peak_bin]) / pn);
}

std::vector<CdfPoint> aggregate_cdf(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("aggregate_cdf: empty input");
  std::sort(values.begin(), values.end());
  std::vector<CdfPoint> cdf;
  cdf.reserve(values.size());
  const double n = static_cast<double>(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) cdf.push_back({values[k], static_cast<double>(k + 1) / n});
  return cdf;
}

std::vector<std::string> ordered_methods(std::vector<std::string> methods) {
  static const std::vector<std::string> kOrder{"noisy", "interfered", "zeroing", "rfmin", "imat"};
  auto rank = [](const std::string& m) {
    const auto it = std::find(kOrder.begin(), kOrder.end(), m);
    return static_cast<std::size_t>(it - kOrder.begin());
  };
  std::stable_sort(methods.begin(), methods.end(),
                   [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });
  return methods;
}

std::vector<std::string> MetricsReport::methods() const {
  std::vector<std::string> out;
  for (const auto& r : records)
    if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  return out;
}

std::vector<MetricsRecord> MetricsReport::for_method(const std::string& method) const {
  std::vector<MetricsRecord> out;
  for (const auto& r : records)
    if (r.method == method) out.push_back(r);
  return out;
}

MethodSummary MetricsReport::summary(const std::string& method) const {
  MethodSummary s;
  s.method = method;
  std::vector<double> sinr, evm, as;
  for (const auto& r : records) {
    if (r.method != method) continue;
    sinr.push_back(r.sinr_rd_db);
    evm.push_back(r.evm_rd);
    as.push_back(r.sinr_as_db);
  }
  s.count = sinr.size();
  if (s.count == 0) return s;
  const double n = static_cast<double>(s.count);
  s.mean_sinr_rd_db = pairwise_sum(std::span<const double>(sinr)) / n;
  s.mean_evm_rd = pairwise_sum(std::span<const double>(evm)) / n;
  s.mean_sinr_as_db = pairwise_sum(std::span<const double>(as)) / n;
  const double mu = s.mean_sinr_rd_db;
  s.std_sinr_rd_db = std::sqrt(
      pairwise_sum(std::span<const double>(sinr), [mu](double v) { return (v - mu) * (v - mu); }) / n);
  return s;
}

std::string MetricsReport::records_csv() const {
  std::ostringstream os;
  os << "method,scenario_seed,sinr_rd_db,evm_rd,sinr_as_db\n";
  for (const auto& r : records)
    os << r.method << ',' << r.scenario_seed << ',' << fmt(r.sinr_rd_db) << ',' << fmt(r.evm_rd) << ','
       << fmt(r.sinr_as_db) << '\n';
  return os.str();
}

std::string MetricsReport::cdf_csv(const std::string& method) const {
  std::vector<double> sinr, evm, as;
  for (const auto& r : for_method(method)) {
    sinr.push_back(r.sinr_rd_db);
    evm.push_back(r.evm_rd);
    as.push_back(r.sinr_as_db);
  }
  std::ostringstream os;
  os << "k,probability,sinr_rd_db,evm_rd,sinr_as_db\n";
  if (sinr.empty()) return os.str();
  const auto c1 = aggregate_cdf(sinr), c2 = aggregate_cdf(evm), c3 = aggregate_cdf(as);
  for (std::size_t k = 0; k < c1.size(); ++k)
    os << k + 1 << ',' << fmt(c1[k].probability) << ',' << fmt(c1[k].value) << ',' << fmt(c2[k].value) << ','
       << fmt(c3[k].value) << '\n';
  return os.str();
}

namespace {

std::string display_name(const std::string& m) {
  if (m == "noisy") return "Noisy";
  if (m == "interfered") return "Interfered";
  if (m == "zeroing") return "Zeroing";
  if (m == "rfmin") return "Ramp filtering";
  if (m == "imat") return "IMAT";
  return m;
}

}  // namespace

std::string MetricsReport::summary_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : ordered_methods(methods())) {
    const auto s = summary(m);
    rows.push_back({{"method", m},
                    {"signal", display_name(m)},
                    {"count", s.count},
                    {"sinr_rd_db", s.mean_sinr_rd_db},
                    {"evm_rd", s.mean_evm_rd},
                    {"sinr_as_db", s.mean_sinr_as_db},
                    {"sinr_rd_db_std", s.std_sinr_rd_db}});
  }
  return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
}

std::string MetricsReport::summary_csv() const {
  std::ostringstream os;
  os << "signal,method,count,sinr_rd_db,evm_rd,sinr_as_db\n";
  for (const auto& m : ordered_methods(methods())) {
    const auto s = summary(m);
    os << display_name(m) << ',' << m << ',' << s.count << ',' << fmt(s.mean_sinr_rd_db) << ','
       << fmt(s.mean_evm_rd) << ',' << fmt(s.mean_sinr_as_db) << '\n';
  }
  return os.str();
}

}  // namespace rmi
