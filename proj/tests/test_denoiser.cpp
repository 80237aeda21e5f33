#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rmi/denoiser.hpp"

using namespace rmi;

namespace {

SpectrumMatrix random_spectrum(std::size_t N, std::size_t M, Stage stage, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> nd(0.0, 3.0);
  SpectrumMatrix s;
  s.values = Matrix<cplx>(N, M);
  s.stage = stage;
  for (auto& v : s.values.data()) v = {nd(g), nd(g)};
  return s;
}

// Trains BN running statistics with one forward pass so eval mode is usable.
void warm_up(DenoiserModel& m, const nn::Shape& s) {
  ForwardCache cache;
  nn::Tensor x(s);
  std::mt19937_64 g(1);
  std::normal_distribution<double> nd;
  for (auto& v : x.data()) v = nd(g);
  m.forward_train(x, cache);
}

// Two-layer 1x1 model: y = (x + B) - B per channel.
DenoiserModel identity_model(Variant v, InputRepr r) {
  ModelSpec spec{v, r, 2, 2, 1, 1};
  DenoiserModel m(spec);
  const std::size_t c = spec.channels();
  auto& first = m.blocks()[0].conv;
  auto& last = m.blocks()[1].conv;
  std::fill(first.weight.begin(), first.weight.end(), 0.0);
  std::fill(last.weight.begin(), last.weight.end(), 0.0);
  std::fill(last.bias.begin(), last.bias.end(), 0.0);
  for (std::size_t i = 0; i < c; ++i) {
    first.w(i, i, 0, 0) = 1.0;
    first.bias[i] = 1e3;
    last.w(i, i, 0, 0) = 1.0;
    last.bias[i] = -1e3;
  }
  return m;
}

}  // namespace

TEST_CASE("parameter counts of the named architectures") {
  CHECK(param_count(preset("model-a")) == 160);
  CHECK(param_count(preset("model-b")) == 3898);
  CHECK(param_count(preset("model-c")) == 5298);
  CHECK(param_count(preset("model-d")) == 10002);
  CHECK(param_count(preset("model-e")) == 14706);
  CHECK(param_count(preset("model-f")) == 38434);
  CHECK(param_count(preset("model-d-lms")) == 9713);
  CHECK(param_count(preset("rpd-ref")) == 17210);
}

TEST_CASE("parameter formula equals instantiation for random specs") {
  std::mt19937_64 g(3);
  for (int t = 0; t < 50; ++t) {
    ModelSpec s;
    s.variant = g() % 2 ? Variant::Rdd : Variant::Rpd;
    s.repr = g() % 2 ? InputRepr::Ris : InputRepr::Lms;
    s.layers = 2 + g() % 7;
    s.kernels = 1 + g() % 20;
    s.s1 = s.variant == Variant::Rpd ? 1 : 2 * (g() % 4) + 1;
    s.s2 = 2 * (g() % 10) + 1;
    CHECK(param_count(s) == DenoiserModel(s).instantiated_param_count());
  }
}

TEST_CASE("invalid specs and presets") {
  CHECK_THROWS_AS(ModelSpec({Variant::Rdd, InputRepr::Ris, 1, 2, 3, 3}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec({Variant::Rdd, InputRepr::Ris, 4, 0, 3, 3}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec({Variant::Rdd, InputRepr::Ris, 4, 2, 2, 3}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(ModelSpec({Variant::Rpd, InputRepr::Ris, 4, 2, 3, 3}).validate(), std::invalid_argument);
  try {
    preset("model-z");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    for (const auto& n : preset_names()) CHECK(msg.find(n) != std::string::npos);
  }
}

TEST_CASE("output shape equals input shape") {
  std::mt19937_64 g(4);
  for (int t = 0; t < 10; ++t) {
    ModelSpec s{Variant::Rdd, InputRepr::Ris, 2 + g() % 4, 1 + g() % 4, 2 * (g() % 3) + 1, 2 * (g() % 3) + 1};
    auto m = build_model(s, t);
    const nn::Shape shape{2, 2, 3 + g() % 6, 3 + g() % 6};
    warm_up(m, shape);
    CHECK(m.forward(nn::Tensor(shape, 0.1)).shape() == shape);
  }
}

TEST_CASE("zero-weight model returns the scaler mean") {
  auto m = build_model(preset("model-a"), 1);
  warm_up(m, {1, 2, 8, 8});
  for (auto& b : m.blocks()) {
    std::fill(b.conv.weight.begin(), b.conv.weight.end(), 0.0);
    std::fill(b.conv.bias.begin(), b.conv.bias.end(), 0.0);
  }
  m.scaler.mean_re = 2.0;
  m.scaler.mean_im = -1.0;
  m.scaler.std = 4.0;
  const auto rd = random_spectrum(8, 8, Stage::RangeDoppler, 2);
  const auto out = denoise_rdd(m, rd);
  CHECK(out.values.rows() == 8);
  for (const auto& v : out.values.data()) CHECK(v == cplx{2.0, -1.0});
}

TEST_CASE("checkpoint round trip is bit-identical") {
  for (const auto* name : {"model-a", "model-d", "rpd-ref", "model-a-lms"}) {
    const auto spec = preset(name);
    auto m = build_model(spec, 5);
    const nn::Shape shape = spec.variant == Variant::Rdd ? nn::Shape{1, spec.channels(), 16, 8}
                                                          : nn::Shape{4, spec.channels(), 1, 48};
    warm_up(m, shape);
    m.scaler.kind = ScalerKind::Css;
    m.scaler.whiten = {0.5, 0.1, 0.1, 0.7};
    m.scaler.color = {2.1, -0.3, -0.3, 1.5};
    const auto bytes = encode_checkpoint(m);
    const auto back = decode_checkpoint(bytes);
    CHECK(back.spec() == m.spec());
    CHECK(back.scaler == m.scaler);
    const nn::Tensor x(shape, 0.3);
    CHECK(back.forward(x) == m.forward(x));
    CHECK(encode_checkpoint(back) == bytes);
  }
  auto bad = encode_checkpoint(build_model(preset("model-a"), 1));
  bad.push_back(0);
  CHECK_THROWS(decode_checkpoint(bad));
  bad.resize(10);
  CHECK_THROWS(decode_checkpoint(bad));
}

TEST_CASE("untrained batch norm rejects eval") {
  const auto m = build_model(preset("model-a"), 1);
  CHECK_THROWS_AS(m.forward(nn::Tensor({1, 2, 4, 4})), std::logic_error);
}

TEST_CASE("identity model reproduces the input") {
  const auto rp = random_spectrum(32, 6, Stage::RangeProfile, 7);
  const auto m = identity_model(Variant::Rpd, InputRepr::Ris);
  const auto out = denoise_rpd(m, rp);
  for (std::size_t i = 0; i < rp.values.size(); ++i)
    CHECK(std::abs(out.values.data()[i] - rp.values.data()[i]) < 1e-10);

  auto rd = random_spectrum(16, 8, Stage::RangeDoppler, 8);
  const auto lms = identity_model(Variant::Rdd, InputRepr::Lms);
  const auto out2 = denoise_rdd(lms, rd);
  for (std::size_t i = 0; i < rd.values.size(); ++i)
    CHECK(std::abs(out2.values.data()[i] - rd.values.data()[i]) < 1e-9 * std::abs(rd.values.data()[i]));
}

TEST_CASE("RPD denoises ramps independently") {
  const auto spec = preset("rpd-ref");
  auto m = build_model(spec, 9);
  warm_up(m, {4, 2, 1, 64});
  const auto rp = random_spectrum(64, 10, Stage::RangeProfile, 10);
  const auto ref = denoise_rpd(m, rp);
  std::vector<std::size_t> perm(10);
  for (std::size_t i = 0; i < 10; ++i) perm[i] = (7 * i + 3) % 10;
  SpectrumMatrix shuffled = rp;
  for (std::size_t m2 = 0; m2 < 10; ++m2)
    for (std::size_t n = 0; n < 64; ++n) shuffled.values(n, m2) = rp.values(n, perm[m2]);
  const auto out = denoise_rpd(m, shuffled);
  for (std::size_t m2 = 0; m2 < 10; ++m2)
    for (std::size_t n = 0; n < 64; ++n) CHECK(out.values(n, m2) == ref.values(n, perm[m2]));
}

TEST_CASE("variant mismatch is rejected") {
  const auto rdd = identity_model(Variant::Rdd, InputRepr::Ris);
  CHECK_THROWS_AS(denoise_rpd(rdd, random_spectrum(8, 4, Stage::RangeProfile, 1)), std::invalid_argument);
}

TEST_CASE("same seed builds the same model") {
  CHECK(encode_checkpoint(build_model(preset("model-d"), 3)) == encode_checkpoint(build_model(preset("model-d"), 3)));
  CHECK(encode_checkpoint(build_model(preset("model-d"), 3)) != encode_checkpoint(build_model(preset("model-d"), 4)));
}

TEST_CASE("minimal two-layer model") {
  const ModelSpec s{Variant::Rdd, InputRepr::Ris, 2, 1, 1, 1};
  CHECK(param_count(s) == 7);
  CHECK(DenoiserModel(s).instantiated_param_count() == 7);
}
