#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "rmi/nn/adam.hpp"
#include "rmi/nn/layers.hpp"
#include "rmi/nn/loss.hpp"
#include "rmi/nn/scaler.hpp"

using namespace rmi::nn;

namespace {

std::mt19937_64 gen(42);

void fill(std::span<double> v, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  for (auto& x : v) x = nd(gen);
}

Tensor random_tensor(Shape s, double scale = 1.0) {
  Tensor t(s);
  fill(t.data(), scale);
  return t;
}

std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(gen); }
std::size_t pick_odd(std::size_t hi) { return 2 * pick(0, (hi - 1) / 2) + 1; }

using oracle::dot;
using oracle::numeric_grad;
using oracle::rel_error;

constexpr double kTol = 1e-3;

void check_conv(bool one_d) {
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t cin = pick(1, 3), cout = pick(1, 3);
    const std::size_t kh = one_d ? 1 : pick_odd(5), kw = pick_odd(7);
    const Shape s{pick(1, 2), cin, one_d ? 1 : pick(2, 6), pick(3, 9)};
    Conv2d conv(cin, cout, kh, kw);
    fill(conv.weight, 0.5);
    fill(conv.bias, 0.5);
    Tensor x = random_tensor(s);
    const Tensor r = random_tensor(conv.forward(x).shape());
    auto f = [&] { return dot(conv.forward(x).data(), r.data()); };
    const auto g = conv.backward(x, r);
    CHECK(rel_error(g.input.data(), numeric_grad(x.data(), f)) < kTol);
    CHECK(rel_error(g.weight, numeric_grad(conv.weight, f)) < kTol);
    CHECK(rel_error(g.bias, numeric_grad(conv.bias, f)) < kTol);
  }
}

}  // namespace

TEST_CASE("conv2d gradients (2-D kernels)") { check_conv(false); }
TEST_CASE("conv2d gradients (1-D kernels)") { check_conv(true); }

TEST_CASE("conv2d same padding and known values") {
  Conv2d conv(1, 1, 3, 3);
  std::fill(conv.weight.begin(), conv.weight.end(), 1.0);
  conv.bias[0] = 0.5;
  Tensor x({1, 1, 3, 3}, 1.0);
  const auto y = conv.forward(x);
  CHECK(y.shape() == x.shape());
  CHECK(y.at(0, 0, 1, 1) == 9.5);
  CHECK(y.at(0, 0, 0, 0) == 4.5);
  CHECK(y.at(0, 0, 0, 1) == 6.5);
  CHECK_THROWS_AS(Conv2d(1, 1, 2, 3), std::invalid_argument);
}

TEST_CASE("batch norm gradients") {
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s{pick(1, 3), pick(1, 3), pick(1, 4), pick(2, 5)};
    BatchNorm2d bn(s.c);
    fill(bn.gamma, 1.0);
    fill(bn.beta, 1.0);
    Tensor x = random_tensor(s, 2.0);
    const Tensor r = random_tensor(s);
    auto f = [&] {
      BatchNorm2d copy = bn;
      BnCache c;
      return dot(copy.forward_train(x, c).data(), r.data());
    };
    BnCache cache;
    BatchNorm2d work = bn;
    work.forward_train(x, cache);
    const auto g = work.backward(cache, r);
    CHECK(rel_error(g.input.data(), numeric_grad(x.data(), f)) < kTol);
    CHECK(rel_error(g.gamma, numeric_grad(bn.gamma, f)) < kTol);
    CHECK(rel_error(g.beta, numeric_grad(bn.beta, f)) < kTol);
  }
}

TEST_CASE("batch norm statistics and modes") {
  BatchNorm2d bn(1);
  Tensor x({2, 1, 1, 2});
  x.data() = {1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(bn.forward_eval(x), std::logic_error);
  BnCache c;
  const auto y = bn.forward_train(x, c);
  double mean = 0, var = 0;
  for (double v : y.data()) mean += v / 4;
  for (double v : y.data()) var += (v - mean) * (v - mean) / 4;
  CHECK(std::abs(mean) < 1e-12);
  CHECK(var == doctest::Approx(1.25 / (1.25 + 1e-5)));
  // momentum 0.1 with unbiased variance 5/3
  CHECK(bn.running_mean[0] == doctest::Approx(0.25));
  CHECK(bn.running_var[0] == doctest::Approx(0.9 + 0.1 * 5.0 / 3.0));
  const auto e = bn.forward_eval(x);
  CHECK(e.at(0, 0, 0, 0) == doctest::Approx((1.0 - 0.25) / std::sqrt(bn.running_var[0] + 1e-5)));
}

TEST_CASE("relu gradients") {
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s{1, pick(1, 3), pick(1, 4), pick(1, 6)};
    Tensor x = random_tensor(s);
    for (auto& v : x.data())
      if (std::abs(v) < 1e-3) v = 0.5;
    const Tensor r = random_tensor(s);
    auto f = [&] { return dot(relu_forward(x).data(), r.data()); };
    CHECK(rel_error(relu_backward(x, r).data(), numeric_grad(x.data(), f)) < kTol);
  }
  Tensor z({1, 1, 1, 1}, 0.0), g({1, 1, 1, 1}, 1.0);
  CHECK(relu_backward(z, g).data()[0] == 0.0);
}

namespace {

SpatialCells random_cells(const Shape& s) {
  SpatialCells c;
  const std::size_t np = pick(1, 3);
  for (std::size_t i = 0; i < np; ++i) c.peaks.emplace_back(pick(0, s.h - 1), pick(0, s.w - 1));
  for (std::size_t h = 0; h < s.h; ++h)
    for (std::size_t w = 0; w < s.w; ++w)
      if (std::find(c.peaks.begin(), c.peaks.end(), std::pair{h, w}) == c.peaks.end()) c.noise.emplace_back(h, w);
  return c;
}

}  // namespace

TEST_CASE("loss gradients") {
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s{pick(1, 2), 2, pick(1, 4), pick(3, 6)};
    Tensor pred = random_tensor(s), target = random_tensor(s);
    std::vector<SpatialCells> cells;
    for (std::size_t n = 0; n < s.n; ++n) cells.push_back(random_cells(s));

    auto mse = [&] { return loss_mse(pred, target).value; };
    CHECK(rel_error(loss_mse(pred, target).grad, numeric_grad(pred.data(), mse)) < kTol);

    auto sinr = [&] { return loss_sinr(pred, cells).value; };
    CHECK(rel_error(loss_sinr(pred, cells).grad, numeric_grad(pred.data(), sinr, 1e-6)) < kTol);

    const LossWeights w{0.4, 0.35, 0.25};
    auto wmse = [&] { return loss_weighted_mse(pred, target, cells, w).value; };
    CHECK(rel_error(loss_weighted_mse(pred, target, cells, w).grad, numeric_grad(pred.data(), wmse, 1e-6)) < kTol);
  }
}

TEST_CASE("loss values and argument checks") {
  Tensor a({1, 2, 1, 2}), b({1, 2, 1, 2});
  a.data() = {1, 2, 3, 4};
  b.data() = {1, 0, 3, 0};
  CHECK(loss_mse(a, b).value == doctest::Approx((4.0 + 16.0) / 4.0));
  SpatialCells c{{{0, 1}}, {{0, 0}}};
  // peak power (2^2 + 4^2) over noise power (1 + 9)
  CHECK(loss_sinr(a, std::span(&c, 1)).value == doctest::Approx(-2.0));
  CHECK_THROWS_AS(loss_weighted_mse(a, b, std::span(&c, 1), {0.5, 0.5, 0.5}), std::invalid_argument);
  Tensor one({1, 1, 1, 2});
  CHECK_THROWS_AS(loss_sinr(one, std::span(&c, 1)), std::invalid_argument);
}

TEST_CASE("Adam matches the closed-form first steps") {
  std::vector<double> p{1.0}, g{0.5};
  Adam opt;
  opt.step({{p, g}}, 0.1);
  const double step = 0.1 * 0.5 / (0.5 + 1e-8);
  CHECK(p[0] == doctest::Approx(1.0 - step).epsilon(1e-14));
  opt.step({{p, g}}, 0.1);
  CHECK(p[0] == doctest::Approx(1.0 - 2.0 * step).epsilon(1e-12));
  CHECK(opt.steps() == 2);
  CHECK_THROWS_AS(opt.step({{p, g}}, 0.0), std::invalid_argument);
}

TEST_CASE("Adam matches a reference loop over random gradients") {
  std::vector<double> p(5), ref(5), m(5, 0.0), v(5, 0.0), g(5);
  fill(p);
  ref = p;
  Adam opt;
  for (int t = 1; t <= 50; ++t) {
    fill(g);
    opt.step({{p, g}}, 1e-2);
    for (std::size_t i = 0; i < 5; ++i) {
      m[i] = 0.9 * m[i] + 0.1 * g[i];
      v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
      const double mh = m[i] / (1 - std::pow(0.9, t)), vh = v[i] / (1 - std::pow(0.999, t));
      ref[i] -= 1e-2 * mh / (std::sqrt(vh) + 1e-8);
    }
  }
  for (std::size_t i = 0; i < 5; ++i) CHECK(p[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("scalers standardize and invert") {
  std::vector<Tensor> data;
  for (int i = 0; i < 4; ++i) {
    Tensor t({1, 2, 8, 8});
    std::normal_distribution<double> nd;
    auto re = t.plane(0, 0), im = t.plane(0, 1);
    for (std::size_t k = 0; k < re.size(); ++k) {
      const double a = nd(gen), b = nd(gen);
      re[k] = 3.0 + 2.0 * a;
      im[k] = -1.0 + 0.5 * a + 0.2 * b;  // correlated with re
    }
    data.push_back(t);
  }
  for (auto kind : {rmi::ScalerKind::Zmuvs, rmi::ScalerKind::Css}) {
    const auto st = fit_scaler(kind, data);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, n = 0;
    for (auto t : data) {
      const Tensor orig = t;
      apply_scaler(st, t);
      auto re = t.plane(0, 0), im = t.plane(0, 1);
      for (std::size_t k = 0; k < re.size(); ++k) {
        sx += re[k];
        sy += im[k];
        sxx += re[k] * re[k];
        sxy += re[k] * im[k];
        syy += im[k] * im[k];
        ++n;
      }
      invert_scaler(st, t);
      for (std::size_t k = 0; k < t.numel(); ++k) CHECK(std::abs(t.data()[k] - orig.data()[k]) < 1e-10);
    }
    CHECK(std::abs(sx / n) < 1e-12);
    CHECK(std::abs(sy / n) < 1e-12);
    if (kind == rmi::ScalerKind::Css) {
      CHECK(sxx / n == doctest::Approx(1.0));
      CHECK(syy / n == doctest::Approx(1.0));
      CHECK(std::abs(sxy / n) < 1e-10);
    } else {
      CHECK((sxx + syy) / (2 * n) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("CSS on degenerate data stays finite") {
  Tensor t({1, 2, 2, 2});
  for (std::size_t k = 0; k < 4; ++k) {
    t.plane(0, 0)[k] = double(k);
    t.plane(0, 1)[k] = 2.0 * double(k);  // rank-one covariance
  }
  const auto st = fit_scaler(rmi::ScalerKind::Css, std::span(&t, 1));
  Tensor u = t;
  apply_scaler(st, u);
  u.check_finite("scaled");
  invert_scaler(st, u);
  for (std::size_t k = 0; k < t.numel(); ++k) CHECK(u.data()[k] == doctest::Approx(t.data()[k]));
  Tensor zero({1, 2, 2, 2});
  const auto z = fit_scaler(rmi::ScalerKind::Css, std::span(&zero, 1));
  CHECK(z.whiten == std::array<double, 4>{1, 0, 0, 1});
}
