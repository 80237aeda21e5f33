#include <stdexcept>

#include "rmi/denoiser.hpp"
#include "rmi/io.hpp"

namespace rmi {

namespace {

constexpr char kMagic[] = "RMCK";
constexpr std::uint32_t kVersion = 1;

void put_vec(ByteWriter& w, const std::vector<double>& v) {
  for (double x : v) w.f64(x);
}

void get_vec(ByteReader& r, std::vector<double>& v) {
  for (auto& x : v) x = r.f64();
}

}  // namespace

// Layout (little endian): magic, version, spec, scaler, then per block the
// batch-norm block (gamma, beta, running mean, running var) and the conv
// block (weights [out][in][kh][kw], bias).
std::vector<std::uint8_t> encode_checkpoint(const DenoiserModel& model) {
  ByteWriter w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kVersion);
  const auto& s = model.spec();
  w.u8(static_cast<std::uint8_t>(s.variant));
  w.u8(static_cast<std::uint8_t>(s.repr));
  w.u32(static_cast<std::uint32_t>(s.layers));
  w.u32(static_cast<std::uint32_t>(s.kernels));
  w.u32(static_cast<std::uint32_t>(s.s1));
  w.u32(static_cast<std::uint32_t>(s.s2));

  const auto& sc = model.scaler;
  w.u8(static_cast<std::uint8_t>(sc.kind));
  w.u32(static_cast<std::uint32_t>(sc.channels));
  w.f64(sc.mean_re);
  w.f64(sc.mean_im);
  w.f64(sc.std);
  for (double v : sc.cov) w.f64(v);
  for (double v : sc.whiten) w.f64(v);
  for (double v : sc.color) w.f64(v);

  for (const auto& b : model.blocks()) {
    if (b.has_bn) {
      w.f64(b.bn.eps);
      w.f64(b.bn.momentum);
      w.u64(b.bn.batches_tracked);
      put_vec(w, b.bn.gamma);
      put_vec(w, b.bn.beta);
      put_vec(w, b.bn.running_mean);
      put_vec(w, b.bn.running_var);
    }
    put_vec(w, b.conv.weight);
    put_vec(w, b.conv.bias);
  }
  return std::move(w.buffer());
}

DenoiserModel decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  if (r.bytes(4) != std::string_view(kMagic, 4)) throw std::runtime_error("checkpoint: bad magic");
  if (const auto v = r.u32(); v != kVersion) throw std::runtime_error("checkpoint: unsupported version " + std::to_string(v));
  ModelSpec s;
  const auto variant = r.u8(), repr = r.u8();
  if (variant > 1 || repr > 1) throw std::runtime_error("checkpoint: bad model spec");
  s.variant = static_cast<Variant>(variant);
  s.repr = static_cast<InputRepr>(repr);
  s.layers = r.u32();
  s.kernels = r.u32();
  s.s1 = r.u32();
  s.s2 = r.u32();
  DenoiserModel model(s);

  auto& sc = model.scaler;
  const auto kind = r.u8();
  if (kind > 1) throw std::runtime_error("checkpoint: bad scaler kind");
  sc.kind = static_cast<ScalerKind>(kind);
  sc.channels = r.u32();
  sc.mean_re = r.f64();
  sc.mean_im = r.f64();
  sc.std = r.f64();
  for (auto& v : sc.cov) v = r.f64();
  for (auto& v : sc.whiten) v = r.f64();
  for (auto& v : sc.color) v = r.f64();

  for (auto& b : model.blocks()) {
    if (b.has_bn) {
      b.bn.eps = r.f64();
      b.bn.momentum = r.f64();
      b.bn.batches_tracked = r.u64();
      get_vec(r, b.bn.gamma);
      get_vec(r, b.bn.beta);
      get_vec(r, b.bn.running_mean);
      get_vec(r, b.bn.running_var);
    }
    get_vec(r, b.conv.weight);
    get_vec(r, b.conv.bias);
  }
  if (!r.done()) throw std::runtime_error("checkpoint: trailing bytes");
  return model;
}

void save_checkpoint(const DenoiserModel& model, const std::string& path) {
  write_file_atomic(path, encode_checkpoint(model));
}

DenoiserModel load_checkpoint(const std::string& path) { return decode_checkpoint(read_binary_file(path)); }

}  // namespace rmi
