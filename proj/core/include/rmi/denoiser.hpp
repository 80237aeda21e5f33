#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rmi/nn/layers.hpp"
#include "rmi/nn/scaler.hpp"
#include "rmi/nn/tensor.hpp"
#include "rmi/rd_chain.hpp"

namespace rmi {

/// RPD denoises single range profiles (1 x N); RDD whole range-Doppler maps.
enum class Variant { Rpd, Rdd };
/// RIS: (real, imaginary) channels; LMS: one log-magnitude channel in dB.
enum class InputRepr { Ris, Lms };

std::string to_string(Variant v);
std::string to_string(InputRepr r);
Variant parse_variant(const std::string& s);
InputRepr parse_repr(const std::string& s);

struct ModelSpec {
  Variant variant = Variant::Rdd;
  InputRepr repr = InputRepr::Ris;
  std::size_t layers = 4;
  std::size_t kernels = 2;
  std::size_t s1 = 3;
  std::size_t s2 = 3;

  std::size_t channels() const { return repr == InputRepr::Ris ? 2 : 1; }
  /// Throws std::invalid_argument on L < 2, K = 0, even kernels or an RPD
  /// kernel with s1 != 1.
  void validate() const;
  std::string label() const;

  bool operator==(const ModelSpec&) const = default;
};

/// conv params per layer plus 2 K per batch-norm (layers 2 .. L-1).
std::size_t param_count(const ModelSpec& spec);

/// Named architectures: model-a .. model-f, model-d-lms, rpd-ref.
ModelSpec preset(const std::string& name);
std::vector<std::string> preset_names();

/// Layer 1: conv + ReLU. Layers 2..L-1: BN + conv + ReLU. Layer L: conv, linear.
struct Block {
  bool has_bn = false;
  bool relu = true;
  nn::BatchNorm2d bn;
  nn::Conv2d conv;
};

struct ForwardCache {
  std::vector<nn::Tensor> block_inputs;
  std::vector<nn::BnCache> bn;
  std::vector<nn::Tensor> conv_inputs;
  std::vector<nn::Tensor> pre_activation;
};

class DenoiserModel {
 public:
  DenoiserModel() = default;
  explicit DenoiserModel(const ModelSpec& spec);

  const ModelSpec& spec() const noexcept { return spec_; }
  std::vector<Block>& blocks() noexcept { return blocks_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  nn::ScalerState scaler;

  /// Eval-mode forward; thread-safe on a const model.
  nn::Tensor forward(const nn::Tensor& x) const;
  /// Train-mode forward recording what backward() needs.
  nn::Tensor forward_train(const nn::Tensor& x, ForwardCache& cache);
  /// Accumulates parameter gradients for d loss / d output = grad_out.
  void backward(const ForwardCache& cache, const std::vector<double>& grad_out);

  void zero_grad();
  std::vector<nn::ParamView> parameters();
  /// Sum of instantiated learnable weight lengths.
  std::size_t instantiated_param_count() const;

 private:
  ModelSpec spec_;
  std::vector<Block> blocks_;
};

/// Kaiming-normal conv weights (fan-in), zero biases, BN gamma 1 / beta 0.
DenoiserModel build_model(const ModelSpec& spec, std::uint64_t seed);

/// Spectrum values to network channels; LMS uses 20 log10(|x| + 1e-12).
nn::Tensor rd_to_tensor(const Matrix<cplx>& map, InputRepr repr);
nn::Tensor rp_to_tensor(const Matrix<cplx>& rp, InputRepr repr);  ///< one batch entry per ramp
inline constexpr double kLmsFloor = 1e-12;

/// scale -> eval forward -> invert scale. LMS output magnitudes are recombined
/// with the input phase.
SpectrumMatrix denoise_rdd(const DenoiserModel& model, const SpectrumMatrix& rd);
/// Each ramp denoised independently; result is still a range profile.
SpectrumMatrix denoise_rpd(const DenoiserModel& model, const SpectrumMatrix& rp);

void save_checkpoint(const DenoiserModel& model, const std::string& path);
DenoiserModel load_checkpoint(const std::string& path);
std::vector<std::uint8_t> encode_checkpoint(const DenoiserModel& model);
DenoiserModel decode_checkpoint(const std::vector<std::uint8_t>& bytes);

}  // namespace rmi
