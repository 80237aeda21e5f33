#include <chrono>
#include <filesystem>

#include "doctest.h"
#include "rmi/dataset.hpp"
#include "rmi/rd_chain.hpp"
#include "rmi/sim.hpp"

using namespace rmi;

namespace {

RunConfig tiny() {
  RunConfig c = desk_run_config();
  c.radar.m_slow = 16;
  c.radar.n_ant = 2;
  c.sizes = {4, 2, 2};
  return c;
}

}  // namespace

TEST_CASE("split seeds are disjoint and overlaps are rejected") {
  const auto s = make_split_seeds(1, {200, 25, 25});
  CHECK(s.train.size() == 200);
  CHECK(s.val.size() == 25);
  CHECK_NOTHROW(check_disjoint(s));
  SplitSeeds bad = s;
  bad.test[3] = bad.train[10];
  CHECK_THROWS_AS(check_disjoint(bad), std::invalid_argument);
  CHECK_THROWS_AS(make_dataset(bad, Variant::Rdd, InputRepr::Ris, tiny()), std::invalid_argument);
  CHECK(make_split_seeds(1, {5, 1, 1}).train == make_split_seeds(1, {5, 1, 1}).train);
  CHECK(make_split_seeds(1, {5, 1, 1}).train != make_split_seeds(2, {5, 1, 1}).train);
}

TEST_CASE("RDD samples are the first antenna's interfered and clean maps") {
  const auto cfg = tiny();
  const std::vector<std::uint64_t> seeds{11, 12};
  const auto ds = build_split(seeds, Variant::Rdd, InputRepr::Ris, cfg, cfg.ranges);
  REQUIRE(ds.records.size() == 2);
  const auto frame = assemble_frame(sample_scenario(11, cfg.ranges), cfg.radar);
  const auto in = rd_maps(frame.samples, cfg.radar)[0];
  const auto tg = rd_maps(frame.clean_samples, cfg.radar)[0];
  const auto x = ds.input_tensor(0), y = ds.target_tensor(0);
  CHECK(x.shape() == nn::Shape{1, 2, cfg.radar.n_fast, cfg.radar.m_slow});
  for (std::size_t k = 0; k < in.values.size(); ++k) {
    CHECK(x.plane(0, 0)[k] == in.values.data()[k].real());
    CHECK(x.plane(0, 1)[k] == in.values.data()[k].imag());
    CHECK(y.plane(0, 0)[k] == tg.values.data()[k].real());
  }
  const auto cells = ds.spatial_cells(0);
  CHECK(!cells.peaks.empty());
  CHECK(cells.noise.size() + cells.peaks.size() < cfg.radar.n_fast * cfg.radar.m_slow);
  CHECK(ds.scenario_seeds() == seeds);
}

TEST_CASE("RPD yields one sample per ramp; LMS is log-magnitude") {
  const auto cfg = tiny();
  const auto ds = build_split({5}, Variant::Rpd, InputRepr::Lms, cfg, cfg.ranges);
  CHECK(ds.records.size() == cfg.radar.m_slow);
  CHECK(ds.sample_shape() == nn::Shape{1, 1, 1, cfg.radar.n_fast});
  const auto frame = assemble_frame(sample_scenario(5, cfg.ranges), cfg.radar);
  const auto rp = range_dft(frame)[0];
  CHECK(ds.records[3].sample_index == 3);
  CHECK(ds.records[3].input[7] == doctest::Approx(20.0 * std::log10(std::abs(rp.values(7, 3)) + 1e-12)));
  const auto cells = ds.spatial_cells(0);
  for (const auto& [h, w] : cells.peaks) CHECK(h == 0);
}

TEST_CASE("container round trip and corrupt input") {
  const auto cfg = tiny();
  const auto ds = build_split({21, 22, 23}, Variant::Rdd, InputRepr::Ris, cfg, cfg.ranges, 2);
  const auto bytes = encode_dataset(ds);
  const auto back = decode_dataset(bytes);
  CHECK(back.header.n_samples == 3);
  CHECK(back.records[2].input == ds.records[2].input);
  CHECK(back.records[2].peaks == ds.records[2].peaks);
  CHECK(encode_dataset(back) == bytes);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS(decode_dataset(bad));
  bad = bytes;
  bad.pop_back();
  CHECK_THROWS(decode_dataset(bad));

  const auto dir = std::filesystem::temp_directory_path() / "rmi_test_dataset";
  std::filesystem::create_directories(dir);
  write_dataset((dir / "d.rdim").string(), ds);
  CHECK(encode_dataset(read_dataset((dir / "d.rdim").string())) == bytes);
  CHECK(!std::filesystem::exists(dir / "d.rdim.tmp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("parallel builds match serial builds") {
  const auto cfg = tiny();
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  CHECK(encode_dataset(build_split(seeds, Variant::Rdd, InputRepr::Ris, cfg, cfg.ranges, 1)) ==
        encode_dataset(build_split(seeds, Variant::Rdd, InputRepr::Ris, cfg, cfg.ranges, 3)));
}

TEST_CASE("reduced-interferer training splits") {
  auto cfg = tiny();
  cfg.max_train_interferers = 1;
  cfg.sizes = {6, 2, 40};
  const auto seeds = make_split_seeds(4, cfg.sizes);
  ScenarioRanges capped = cfg.ranges;
  capped.n_interferers.max = 1;
  for (auto s : seeds.train) CHECK(sample_scenario(s, capped).interferers.size() == 1);
  const auto b = make_dataset(seeds, Variant::Rdd, InputRepr::Ris, cfg);
  CHECK(b.train.records.size() == 6);
  std::size_t max_ni = 0;
  for (auto s : seeds.test) max_ni = std::max(max_ni, sample_scenario(s, cfg.ranges).interferers.size());
  CHECK(max_ni == 3);
}

TEST_CASE("desk-scale generation time") {
  const auto cfg = desk_run_config();
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = make_dataset(make_split_seeds(cfg.seed, cfg.sizes), Variant::Rdd, InputRepr::Ris, cfg, 1);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(b.train.records.size() == 200);
  CHECK(b.test.records.size() == 25);
  CHECK(s < 300.0);
}
