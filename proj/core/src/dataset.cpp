#include "rmi/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "rmi/io.hpp"
#include "rmi/rd_chain.hpp"
#include "rmi/rng.hpp"
#include "rmi/sim.hpp"

namespace rmi {

namespace {

constexpr char kMagic[] = "RDIM";

std::size_t elements(const DatasetHeader& h) {
  return h.variant == Variant::Rdd ? static_cast<std::size_t>(h.n) * h.m : h.n;
}

std::size_t channels_of(InputRepr r) { return r == InputRepr::Ris ? 2 : 1; }

// Interleaved (re, im) or log-magnitude values of one spectrum slice.
void append_values(std::vector<double>& out, std::span<const cplx> v, InputRepr repr) {
  for (const auto& z : v) {
    if (repr == InputRepr::Ris) {
      out.push_back(z.real());
      out.push_back(z.imag());
    } else {
      out.push_back(20.0 * std::log10(std::abs(z) + kLmsFloor));
    }
  }
}

nn::Tensor to_tensor(const std::vector<double>& v, const nn::Shape& s) {
  nn::Tensor t(s);
  const std::size_t plane = s.plane();
  if (s.c == 2) {
    auto re = t.plane(0, 0), im = t.plane(0, 1);
    for (std::size_t k = 0; k < plane; ++k) {
      re[k] = v[2 * k];
      im[k] = v[2 * k + 1];
    }
  } else {
    std::copy(v.begin(), v.end(), t.data().begin());
  }
  return t;
}

Cube first_antenna(const Cube& c) {
  Cube out(c.n_fast(), c.m_slow(), 1);
  for (std::size_t m = 0; m < c.m_slow(); ++m) std::ranges::copy(c.ramp(m, 0), out.ramp(m, 0).begin());
  return out;
}

}  // namespace

nn::Shape Dataset::sample_shape() const {
  const std::size_t C = channels();
  if (header.variant == Variant::Rdd) return {1, C, header.n, header.m};
  return {1, C, 1, header.n};
}

nn::Tensor Dataset::input_tensor(std::size_t i) const { return to_tensor(records.at(i).input, sample_shape()); }
nn::Tensor Dataset::target_tensor(std::size_t i) const { return to_tensor(records.at(i).target, sample_shape()); }

nn::SpatialCells Dataset::spatial_cells(std::size_t i) const {
  const auto& rec = records.at(i);
  nn::SpatialCells sc;
  if (header.variant == Variant::Rdd) {
    const auto cs = cell_sets_from_peaks(rec.peaks, header.n, header.m, rec.guard_range, rec.guard_doppler);
    sc.peaks = cs.peak_cells;
    sc.noise = cs.noise_cells;
    return sc;
  }
  std::vector<std::uint8_t> excluded(header.n, 0);
  for (const auto& [r, d] : rec.peaks) {
    if (std::find(sc.peaks.begin(), sc.peaks.end(), std::pair<std::size_t, std::size_t>{0, r}) == sc.peaks.end())
      sc.peaks.emplace_back(0, r);
    for (std::size_t k = 0; k < header.n; ++k) {
      const std::size_t dist = std::min((k + header.n - r) % header.n, (r + header.n - k) % header.n);
      if (dist <= rec.guard_range) excluded[k] = 1;
    }
  }
  for (std::size_t k = 0; k < header.n; ++k)
    if (!excluded[k]) sc.noise.emplace_back(0, k);
  return sc;
}

std::vector<std::uint64_t> Dataset::scenario_seeds() const {
  std::vector<std::uint64_t> out;
  std::unordered_set<std::uint64_t> seen;
  for (const auto& r : records)
    if (seen.insert(r.scenario_seed).second) out.push_back(r.scenario_seed);
  return out;
}

std::vector<std::uint8_t> encode_dataset(const Dataset& ds) {
  const auto& h = ds.header;
  const std::size_t vals = elements(h) * channels_of(h.repr);
  ByteWriter w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kDatasetVersion);
  w.u8(static_cast<std::uint8_t>(h.variant));
  w.u8(static_cast<std::uint8_t>(h.repr));
  w.u32(h.n);
  w.u32(h.m);
  w.u64(h.n_scenarios);
  w.u64(ds.records.size());
  for (const auto& r : ds.records) {
    if (r.input.size() != vals || r.target.size() != vals)
      throw std::invalid_argument("encode_dataset: record size does not match header");
    w.u64(r.scenario_seed);
    w.u32(r.sample_index);
    for (double v : r.input) w.f64(v);
    for (double v : r.target) w.f64(v);
    w.u32(static_cast<std::uint32_t>(r.peaks.size()));
    for (const auto& [a, b] : r.peaks) {
      w.u32(static_cast<std::uint32_t>(a));
      w.u32(static_cast<std::uint32_t>(b));
    }
    w.u32(r.guard_range);
    w.u32(r.guard_doppler);
  }
  return std::move(w.buffer());
}

Dataset decode_dataset(const std::vector<std::uint8_t>& bytes) {
  ByteReader rd(bytes);
  if (rd.bytes(4) != std::string_view(kMagic, 4)) throw std::runtime_error("dataset: bad magic");
  if (const auto v = rd.u32(); v != kDatasetVersion)
    throw std::runtime_error("dataset: unsupported version " + std::to_string(v));
  Dataset ds;
  auto& h = ds.header;
  const auto variant = rd.u8(), repr = rd.u8();
  if (variant > 1 || repr > 1) throw std::runtime_error("dataset: bad variant/representation");
  h.variant = static_cast<Variant>(variant);
  h.repr = static_cast<InputRepr>(repr);
  h.n = rd.u32();
  h.m = rd.u32();
  h.n_scenarios = rd.u64();
  h.n_samples = rd.u64();
  const std::size_t vals = elements(h) * channels_of(h.repr);
  ds.records.resize(h.n_samples);
  for (auto& r : ds.records) {
    r.scenario_seed = rd.u64();
    r.sample_index = rd.u32();
    r.input.resize(vals);
    r.target.resize(vals);
    for (auto& v : r.input) v = rd.f64();
    for (auto& v : r.target) v = rd.f64();
    r.peaks.resize(rd.u32());
    for (auto& [a, b] : r.peaks) {
      a = rd.u32();
      b = rd.u32();
    }
    r.guard_range = rd.u32();
    r.guard_doppler = rd.u32();
  }
  if (!rd.done()) throw std::runtime_error("dataset: trailing bytes");
  return ds;
}

void write_dataset(const std::string& path, const Dataset& ds) { write_file_atomic(path, encode_dataset(ds)); }
Dataset read_dataset(const std::string& path) { return decode_dataset(read_binary_file(path)); }

SplitSeeds make_split_seeds(std::uint64_t base_seed, const DatasetSizes& sizes) {
  SplitSeeds s;
  std::uint64_t k = 0;
  auto next = [&] { return mix_seed(mix_seed(base_seed) + k++); };
  for (std::size_t i = 0; i < sizes.train; ++i) s.train.push_back(next());
  for (std::size_t i = 0; i < sizes.val; ++i) s.val.push_back(next());
  for (std::size_t i = 0; i < sizes.test; ++i) s.test.push_back(next());
  check_disjoint(s);
  return s;
}

void check_disjoint(const SplitSeeds& seeds) {
  std::unordered_set<std::uint64_t> seen;
  for (const auto* split : {&seeds.train, &seeds.val, &seeds.test})
    for (auto s : *split)
      if (!seen.insert(s).second)
        throw std::invalid_argument("dataset splits overlap: scenario seed " + std::to_string(s) + " appears twice");
}

Dataset build_split(const std::vector<std::uint64_t>& seeds, Variant variant, InputRepr repr, const RunConfig& cfg,
                    const ScenarioRanges& ranges, std::size_t jobs) {
  const std::size_t N = cfg.radar.n_fast, M = cfg.radar.m_slow;
  VictimRadarConfig one = cfg.radar;
  one.n_ant = 1;

  std::vector<std::vector<DatasetRecord>> per_scenario(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    const Scenario sc = sample_scenario(seeds[i], ranges);
    const IfFrame frame = assemble_frame(sc, cfg.radar);
    const auto cells = cell_sets(sc, cfg.radar, cfg.metrics.guard_range, cfg.metrics.guard_doppler);
    const auto in_rp = range_dft(first_antenna(frame.samples), one).front();
    const auto tg_rp = range_dft(first_antenna(frame.clean_samples), one).front();

    auto base = [&] {
      DatasetRecord r;
      r.scenario_seed = seeds[i];
      r.peaks = cells.peak_cells;
      r.guard_range = static_cast<std::uint32_t>(cfg.metrics.guard_range);
      r.guard_doppler = static_cast<std::uint32_t>(cfg.metrics.guard_doppler);
      return r;
    };
    auto& out = per_scenario[i];
    if (variant == Variant::Rdd) {
      const auto in_rd = doppler_dft(in_rp, one);
      const auto tg_rd = doppler_dft(tg_rp, one);
      DatasetRecord r = base();
      append_values(r.input, in_rd.values.data(), repr);
      append_values(r.target, tg_rd.values.data(), repr);
      out.push_back(std::move(r));
    } else {
      std::vector<cplx> col_in(N), col_tg(N);
      for (std::size_t m = 0; m < M; ++m) {
        for (std::size_t n = 0; n < N; ++n) {
          col_in[n] = in_rp.values(n, m);
          col_tg[n] = tg_rp.values(n, m);
        }
        DatasetRecord r = base();
        r.sample_index = static_cast<std::uint32_t>(m);
        append_values(r.input, col_in, repr);
        append_values(r.target, col_tg, repr);
        out.push_back(std::move(r));
      }
    }
  });

  Dataset ds;
  ds.header = {variant, repr, static_cast<std::uint32_t>(N), static_cast<std::uint32_t>(M), seeds.size(), 0};
  for (auto& v : per_scenario)
    for (auto& r : v) ds.records.push_back(std::move(r));
  ds.header.n_samples = ds.records.size();
  return ds;
}

DatasetBundle make_dataset(const SplitSeeds& seeds, Variant variant, InputRepr repr, const RunConfig& cfg,
                           std::size_t jobs) {
  check_disjoint(seeds);
  ScenarioRanges train_ranges = cfg.ranges;
  if (cfg.max_train_interferers > 0)
    train_ranges.n_interferers.max = std::min(train_ranges.n_interferers.max, cfg.max_train_interferers);
  DatasetBundle b;
  b.train = build_split(seeds.train, variant, repr, cfg, train_ranges, jobs);
  b.val = build_split(seeds.val, variant, repr, cfg, train_ranges, jobs);
  b.test = build_split(seeds.test, variant, repr, cfg, cfg.ranges, jobs);
  return b;
}

}  // namespace rmi
