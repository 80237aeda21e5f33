#include "rmi/denoiser.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "rmi/rng.hpp"

namespace rmi {

std::string to_string(Variant v) { return v == Variant::Rpd ? "rpd" : "rdd"; }
std::string to_string(InputRepr r) { return r == InputRepr::Ris ? "ris" : "lms"; }

Variant parse_variant(const std::string& s) {
  if (s == "rpd") return Variant::Rpd;
  if (s == "rdd") return Variant::Rdd;
  throw std::invalid_argument("unknown variant '" + s + "' (expected rpd or rdd)");
}

InputRepr parse_repr(const std::string& s) {
  if (s == "ris") return InputRepr::Ris;
  if (s == "lms") return InputRepr::Lms;
  throw std::invalid_argument("unknown input representation '" + s + "' (expected ris or lms)");
}

void ModelSpec::validate() const {
  if (layers < 2) throw std::invalid_argument("ModelSpec: at least two layers required");
  if (kernels == 0) throw std::invalid_argument("ModelSpec: kernel count must be positive");
  if (s1 == 0 || s2 == 0 || s1 % 2 == 0 || s2 % 2 == 0)
    throw std::invalid_argument("ModelSpec: kernel extents must be odd");
  if (variant == Variant::Rpd && s1 != 1) throw std::invalid_argument("ModelSpec: RPD uses 1 x s kernels");
}

std::string ModelSpec::label() const {
  return to_string(variant) + "-" + to_string(repr) + "-L" + std::to_string(layers) + "-K" + std::to_string(kernels) +
         "-" + std::to_string(s1) + "x" + std::to_string(s2);
}

std::size_t param_count(const ModelSpec& spec) {
  spec.validate();
  const std::size_t c = spec.channels(), k = spec.kernels, taps = spec.s1 * spec.s2;
  auto conv = [taps](std::size_t in, std::size_t out) { return out * (in * taps) + out; };
  std::size_t total = conv(c, k) + conv(k, c);
  total += (spec.layers - 2) * (2 * k + conv(k, k));
  return total;
}

namespace {

const std::map<std::string, ModelSpec>& presets() {
  static const std::map<std::string, ModelSpec> p{
      {"model-a", {Variant::Rdd, InputRepr::Ris, 4, 2, 3, 3}},
      {"model-b", {Variant::Rdd, InputRepr::Ris, 8, 8, 3, 3}},
      {"model-c", {Variant::Rdd, InputRepr::Ris, 4, 16, 3, 3}},
      {"model-d", {Variant::Rdd, InputRepr::Ris, 6, 16, 3, 3}},
      {"model-e", {Variant::Rdd, InputRepr::Ris, 8, 16, 3, 3}},
      {"model-f", {Variant::Rdd, InputRepr::Ris, 6, 32, 3, 3}},
      {"model-a-lms", {Variant::Rdd, InputRepr::Lms, 4, 2, 3, 3}},
      {"model-d-lms", {Variant::Rdd, InputRepr::Lms, 6, 16, 3, 3}},
      {"rpd-ref", {Variant::Rpd, InputRepr::Ris, 8, 8, 1, 41}},
      {"rpd-best", {Variant::Rpd, InputRepr::Ris, 6, 16, 1, 41}},
  };
  return p;
}

}  // namespace

ModelSpec preset(const std::string& name) {
  const auto& p = presets();
  const auto it = p.find(name);
  if (it == p.end()) {
    std::string valid;
    for (const auto& [k, v] : p) valid += (valid.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown preset '" + name + "'; valid presets: " + valid);
  }
  return it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

DenoiserModel::DenoiserModel(const ModelSpec& spec) : spec_(spec) {
  spec.validate();
  const std::size_t c = spec.channels(), k = spec.kernels;
  blocks_.resize(spec.layers);
  for (std::size_t l = 0; l < spec.layers; ++l) {
    auto& b = blocks_[l];
    const bool first = l == 0, last = l + 1 == spec.layers;
    b.has_bn = !first && !last;
    b.relu = !last;
    if (b.has_bn) b.bn = nn::BatchNorm2d(k);
    b.conv = nn::Conv2d(first ? c : k, last ? c : k, spec.s1, spec.s2);
  }
  scaler.channels = c;
}

nn::Tensor DenoiserModel::forward(const nn::Tensor& x) const {
  nn::Tensor h = x;
  for (const auto& b : blocks_) {
    if (b.has_bn) h = b.bn.forward_eval(h);
    h = b.conv.forward(h);
    if (b.relu) h = nn::relu_forward(h);
  }
  h.check_finite("denoiser forward");
  return h;
}

nn::Tensor DenoiserModel::forward_train(const nn::Tensor& x, ForwardCache& cache) {
  const std::size_t L = blocks_.size();
  cache.bn.assign(L, {});
  cache.conv_inputs.assign(L, {});
  cache.pre_activation.assign(L, {});
  cache.block_inputs.clear();
  nn::Tensor h = x;
  for (std::size_t l = 0; l < L; ++l) {
    auto& b = blocks_[l];
    if (b.has_bn) h = b.bn.forward_train(h, cache.bn[l]);
    cache.conv_inputs[l] = h;
    h = b.conv.forward(h);
    if (b.relu) {
      cache.pre_activation[l] = h;
      h = nn::relu_forward(h);
    }
  }
  h.check_finite("denoiser forward");
  return h;
}

void DenoiserModel::backward(const ForwardCache& cache, const std::vector<double>& grad_out) {
  const std::size_t L = blocks_.size();
  if (cache.conv_inputs.size() != L) throw std::logic_error("DenoiserModel::backward: missing forward cache");
  const auto& last_in = cache.conv_inputs[L - 1].shape();
  nn::Tensor g({last_in.n, blocks_[L - 1].conv.out_channels(), last_in.h, last_in.w});
  if (g.numel() != grad_out.size()) throw std::invalid_argument("DenoiserModel::backward: gradient size mismatch");
  g.data() = grad_out;
  for (std::size_t l = L; l-- > 0;) {
    auto& b = blocks_[l];
    if (b.relu) g = nn::relu_backward(cache.pre_activation[l], g);
    auto cg = b.conv.backward(cache.conv_inputs[l], g);
    for (std::size_t i = 0; i < cg.weight.size(); ++i) b.conv.weight_grad[i] += cg.weight[i];
    for (std::size_t i = 0; i < cg.bias.size(); ++i) b.conv.bias_grad[i] += cg.bias[i];
    g = std::move(cg.input);
    if (b.has_bn) {
      auto bg = b.bn.backward(cache.bn[l], g);
      for (std::size_t i = 0; i < bg.gamma.size(); ++i) {
        b.bn.gamma_grad[i] += bg.gamma[i];
        b.bn.beta_grad[i] += bg.beta[i];
      }
      g = std::move(bg.input);
    }
  }
}

void DenoiserModel::zero_grad() {
  for (auto& b : blocks_) {
    std::fill(b.conv.weight_grad.begin(), b.conv.weight_grad.end(), 0.0);
    std::fill(b.conv.bias_grad.begin(), b.conv.bias_grad.end(), 0.0);
    std::fill(b.bn.gamma_grad.begin(), b.bn.gamma_grad.end(), 0.0);
    std::fill(b.bn.beta_grad.begin(), b.bn.beta_grad.end(), 0.0);
  }
}

std::vector<nn::ParamView> DenoiserModel::parameters() {
  std::vector<nn::ParamView> out;
  for (auto& b : blocks_) {
    if (b.has_bn) {
      out.push_back({b.bn.gamma, b.bn.gamma_grad});
      out.push_back({b.bn.beta, b.bn.beta_grad});
    }
    out.push_back({b.conv.weight, b.conv.weight_grad});
    out.push_back({b.conv.bias, b.conv.bias_grad});
  }
  return out;
}

std::size_t DenoiserModel::instantiated_param_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) {
    if (b.has_bn) n += b.bn.param_count();
    n += b.conv.param_count();
  }
  return n;
}

DenoiserModel build_model(const ModelSpec& spec, std::uint64_t seed) {
  DenoiserModel model(spec);
  Rng rng(mix_seed(seed));
  for (auto& b : model.blocks()) {
    const double fan_in = static_cast<double>(b.conv.in_channels() * b.conv.kernel_h() * b.conv.kernel_w());
    const double sd = std::sqrt(2.0 / fan_in);
    for (auto& w : b.conv.weight) w = sd * rng.normal();
  }
  return model;
}

nn::Tensor rd_to_tensor(const Matrix<cplx>& map, InputRepr repr) {
  const std::size_t H = map.rows(), W = map.cols();
  if (repr == InputRepr::Ris) {
    nn::Tensor t({1, 2, H, W});
    auto re = t.plane(0, 0), im = t.plane(0, 1);
    for (std::size_t k = 0; k < H * W; ++k) {
      re[k] = map.data()[k].real();
      im[k] = map.data()[k].imag();
    }
    return t;
  }
  nn::Tensor t({1, 1, H, W});
  auto p = t.plane(0, 0);
  for (std::size_t k = 0; k < H * W; ++k) p[k] = 20.0 * std::log10(std::abs(map.data()[k]) + kLmsFloor);
  return t;
}

nn::Tensor rp_to_tensor(const Matrix<cplx>& rp, InputRepr repr) {
  const std::size_t N = rp.rows(), M = rp.cols();
  const std::size_t C = repr == InputRepr::Ris ? 2 : 1;
  nn::Tensor t({M, C, 1, N});
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < N; ++n) {
      const cplx v = rp(n, m);
      if (repr == InputRepr::Ris) {
        t.at(m, 0, 0, n) = v.real();
        t.at(m, 1, 0, n) = v.imag();
      } else {
        t.at(m, 0, 0, n) = 20.0 * std::log10(std::abs(v) + kLmsFloor);
      }
    }
  }
  return t;
}

namespace {

cplx to_complex(const nn::Tensor& y, std::size_t b, std::size_t k, InputRepr repr, const cplx& input) {
  if (repr == InputRepr::Ris) return {y.plane(b, 0)[k], y.plane(b, 1)[k]};
  const double mag = std::max(std::pow(10.0, y.plane(b, 0)[k] / 20.0) - kLmsFloor, 0.0);
  return std::polar(mag, std::arg(input));
}

nn::Tensor run_scaled(const DenoiserModel& model, nn::Tensor t) {
  nn::apply_scaler(model.scaler, t);
  nn::Tensor y = model.forward(t);
  nn::invert_scaler(model.scaler, y);
  return y;
}

}  // namespace

SpectrumMatrix denoise_rdd(const DenoiserModel& model, const SpectrumMatrix& rd) {
  if (model.spec().variant != Variant::Rdd) throw std::invalid_argument("denoise_rdd: model is not an RDD model");
  const InputRepr repr = model.spec().repr;
  const nn::Tensor y = run_scaled(model, rd_to_tensor(rd.values, repr));
  SpectrumMatrix out = rd;
  for (std::size_t k = 0; k < rd.values.size(); ++k) out.values.data()[k] = to_complex(y, 0, k, repr, rd.values.data()[k]);
  return out;
}

SpectrumMatrix denoise_rpd(const DenoiserModel& model, const SpectrumMatrix& rp) {
  if (model.spec().variant != Variant::Rpd) throw std::invalid_argument("denoise_rpd: model is not an RPD model");
  if (rp.stage != Stage::RangeProfile) throw std::invalid_argument("denoise_rpd: expected a range profile");
  const InputRepr repr = model.spec().repr;
  const nn::Tensor y = run_scaled(model, rp_to_tensor(rp.values, repr));
  SpectrumMatrix out = rp;
  for (std::size_t m = 0; m < rp.m_bins(); ++m)
    for (std::size_t n = 0; n < rp.n_bins(); ++n) out.values(n, m) = to_complex(y, m, n, repr, rp.values(n, m));
  return out;
}

}  // namespace rmi
