#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rmi/metrics.hpp"

using namespace rmi;

using oracle::circ;
using oracle::literal_evm;
using oracle::literal_sinr;

TEST_CASE("sinr_rd and evm_rd match literal reimplementations") {
  std::mt19937_64 g(7);
  std::uniform_int_distribution<std::size_t> dim(12, 40), cnt(1, 6), gsz(1, 4);
  for (int t = 0; t < 50; ++t) {
    const std::size_t R = dim(g), D = dim(g);
    const auto S = oracle::random_matrix(R, D, g), C = oracle::random_matrix(R, D, g);
    std::vector<Cell> peaks;
    const std::size_t k = cnt(g);
    for (std::size_t i = 0; i < k; ++i) peaks.emplace_back(g() % R, g() % D);
    const std::size_t gr = gsz(g), gd = gsz(g);
    const auto cs = cell_sets_from_peaks(peaks, R, D, gr, gd);
    std::vector<Cell> unique;
    for (const auto& p : peaks)
      if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
    CHECK(std::abs(sinr_rd(S, cs) - literal_sinr(S, unique, gr, gd)) < 1e-12);
    CHECK(std::abs(evm_rd(C, S, cs) - literal_evm(C, S, unique)) < 1e-12);
  }
}

TEST_CASE("closed-form SINR and EVM cases") {
  Matrix<cplx> S(32, 32, cplx{1.0, 0.0});
  S(5, 5) = 10.0;
  S(20, 12) = cplx{0.0, 10.0};
  const auto cs = cell_sets_from_peaks({{5, 5}, {20, 12}}, 32, 32, 4, 4);
  CHECK(sinr_rd(S, cs) == 20.0);
  CHECK(evm_rd(S, S, cs) == 0.0);
  Matrix<cplx> half = S;
  half(5, 5) = 5.0;
  half(20, 12) = cplx{0.0, 5.0};
  CHECK(evm_rd(S, half, cs) == 0.5);

  Matrix<cplx> quiet(32, 32);
  quiet(5, 5) = 1.0;
  CHECK(sinr_rd(quiet, cell_sets_from_peaks({{5, 5}}, 32, 32, 4, 4)) == kInfSinr);
}

TEST_CASE("guard boxes wrap around the map edges") {
  const auto cs = cell_sets_from_peaks({{0, 0}}, 16, 16, 2, 2);
  CHECK(cs.noise_cells.size() == 16 * 16 - 25);
  for (const auto& [r, d] : cs.noise_cells) CHECK((circ(r, 0, 16) > 2 || circ(d, 0, 16) > 2));
  CHECK_THROWS_AS(cell_sets_from_peaks({{0, 0}}, 16, 16, 0, 2), std::invalid_argument);
}

TEST_CASE("sinr_as matches the 1-D definition") {
  std::mt19937_64 g(9);
  std::normal_distribution<double> nd;
  AngularSpectrum as;
  as.values.resize(64);
  for (auto& v : as.values) v = {nd(g), nd(g)};
  const std::size_t peak = 60, guard = 16;
  const double ref = oracle::literal_sinr_as(as.values, peak, guard);
  CHECK(std::abs(sinr_as(as, peak, guard) - ref) < 1e-12);
  CHECK_THROWS_AS(sinr_as(as, 64, guard), std::out_of_range);
}

TEST_CASE("object cells and peak dedupe") {
  VictimRadarConfig cfg;
  const ObjectParams o{7.9, 5.5, 0.0, 1.0};
  const auto c = object_cell(o, cfg);
  CHECK(c.first == std::size_t(std::lround(7.9 / cfg.range_resolution())));
  CHECK(c.second == std::size_t(64 + std::lround(5.5 / cfg.velocity_resolution())));
  Scenario s;
  s.objects = {o, o};
  CHECK(cell_sets(s, cfg).peak_cells.size() == 1);
}

TEST_CASE("empirical CDF is within the DKW band") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u;
  std::vector<double> v(2000);
  for (auto& x : v) x = u(g);
  const auto cdf = aggregate_cdf(v);
  REQUIRE(cdf.size() == v.size());
  CHECK(cdf.back().probability == 1.0);
  const double eps = std::sqrt(std::log(2.0 / 0.001) / (2.0 * double(v.size())));
  double sup = 0.0;
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    if (i) CHECK(cdf[i].value >= cdf[i - 1].value);
    sup = std::max(sup, std::abs(cdf[i].probability - cdf[i].value));
  }
  CHECK(sup < eps);
  CHECK_THROWS_AS(aggregate_cdf({}), std::invalid_argument);
}

TEST_CASE("report tables") {
  MetricsReport rep;
  rep.records = {{"zeroing", 1, 10.0, 0.1, 5.0}, {"noisy", 1, 20.0, 0.0, 7.0}, {"zeroing", 2, 14.0, 0.3, 6.0}};
  CHECK(rep.summary("zeroing").mean_sinr_rd_db == 12.0);
  CHECK(rep.summary("zeroing").count == 2);
  CHECK(rep.records_csv().rfind("method,scenario_seed,sinr_rd_db,evm_rd,sinr_as_db\n", 0) == 0);
  const auto csv = rep.summary_csv();
  CHECK(csv.find("noisy") < csv.find("zeroing"));
  CHECK(rep.cdf_csv("zeroing").find("1,0.5,10,0.1,5") != std::string::npos);
}
