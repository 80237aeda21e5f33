#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rmi/config.hpp"
#include "rmi/mitigation.hpp"
#include "rmi/rd_chain.hpp"
#include "rmi/sim.hpp"

using namespace rmi;

namespace {

IfFrame desk_frame(std::uint64_t seed, std::size_t m_slow = 16, std::size_t n_ant = 2) {
  auto cfg = desk_run_config();
  cfg.radar.m_slow = m_slow;
  cfg.radar.n_ant = n_ant;
  return assemble_frame(sample_scenario(seed, cfg.ranges), cfg.radar);
}

}  // namespace

TEST_CASE("zeroing clears exactly the masked samples") {
  const auto f = desk_frame(4);
  const auto z = zeroing(f);
  for (std::size_t a = 0; a < f.cfg.n_ant; ++a)
    for (std::size_t m = 0; m < f.cfg.m_slow; ++m)
      for (std::size_t n = 0; n < f.cfg.n_fast; ++n) {
        if (f.interference_mask(n, m))
          CHECK(z.samples(n, m, a) == cplx{});
        else
          CHECK(z.samples(n, m, a) == f.samples(n, m, a));
      }
}

TEST_CASE("no interference: zeroing and IMAT are the identity") {
  auto cfg = desk_run_config();
  cfg.radar.m_slow = 8;
  cfg.radar.n_ant = 2;
  Scenario s = sample_scenario(8, cfg.ranges);
  s.sir_db = std::numeric_limits<double>::infinity();
  const auto f = assemble_frame(s, cfg.radar);
  CHECK(zeroing(f).samples == f.samples);
  CHECK(imat(f).samples == f.samples);
}

TEST_CASE("IMAT restores a sparse sinusoid across a gap") {
  const std::size_t N = 256;
  std::vector<cplx> x(N);
  for (std::size_t n = 0; n < N; ++n)
    x[n] = std::polar(1.0, 2.0 * oracle::pi * 17.0 * double(n) / double(N)) +
           std::polar(0.5, 2.0 * oracle::pi * 60.0 * double(n) / double(N) + 0.4);
  std::vector<std::uint8_t> gap(N, 0);
  for (std::size_t n = 100; n < 126; ++n) gap[n] = 1;
  ImatParams p;
  p.max_iter = 200;
  const auto rec = imat_reconstruct(x, gap, p);
  double err = 0.0, ref = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    err += std::norm(rec[n] - x[n]);
    ref += std::norm(x[n]);
    if (!gap[n]) CHECK(rec[n] == x[n]);
  }
  CHECK(std::sqrt(err / ref) < 1e-2);

  // zero-filled input is much worse
  double zf = 0.0;
  for (std::size_t n = 0; n < N; ++n)
    if (gap[n]) zf += std::norm(x[n]);
  CHECK(std::sqrt(zf / ref) > 0.1);
}

TEST_CASE("IMAT parameter validation") {
  ImatParams p;
  p.threshold_decay = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.threshold_decay = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("rfmin keeps phase, bounds magnitude and equalizes slow time") {
  const auto f = desk_frame(5);
  const auto rp = range_dft(f);
  const auto out = rfmin(rp);
  for (std::size_t a = 0; a < rp.size(); ++a)
    for (std::size_t n = 0; n < rp[a].n_bins(); ++n) {
      double mu = 1e300;
      for (std::size_t m = 0; m < rp[a].m_bins(); ++m) mu = std::min(mu, std::abs(rp[a].values(n, m)));
      for (std::size_t m = 0; m < rp[a].m_bins(); ++m) {
        const cplx in = rp[a].values(n, m), o = out[a].values(n, m);
        CHECK(std::abs(o) <= std::abs(in) * (1 + 1e-15));
        CHECK(std::abs(o) == doctest::Approx(mu).epsilon(1e-12));
        if (std::abs(in) > 0.0 && mu > 0.0) CHECK(std::abs(std::arg(o / in)) < 1e-12);
      }
    }
}

TEST_CASE("rfmin is the identity on constant-magnitude slow time") {
  SpectrumMatrix rp;
  rp.values = Matrix<cplx>(4, 6);
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t m = 0; m < 6; ++m) rp.values(n, m) = std::polar(double(n + 1), 0.3 * double(m * n));
  const auto out = rfmin(rp);
  for (std::size_t i = 0; i < rp.values.size(); ++i)
    CHECK(std::abs(out.values.data()[i] - rp.values.data()[i]) < 1e-12);
  rp.stage = Stage::RangeDoppler;
  CHECK_THROWS_AS(rfmin(rp), std::invalid_argument);
}
