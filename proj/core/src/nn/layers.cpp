#include "rmi/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmi::nn {

Conv2d::Conv2d(std::size_t in_ch, std::size_t out_ch, std::size_t kh, std::size_t kw)
    : weight(out_ch * in_ch * kh * kw, 0.0),
      bias(out_ch, 0.0),
      weight_grad(weight.size(), 0.0),
      bias_grad(out_ch, 0.0),
      in_ch_(in_ch),
      out_ch_(out_ch),
      kh_(kh),
      kw_(kw) {
  if (in_ch == 0 || out_ch == 0) throw std::invalid_argument("Conv2d: zero channels");
  if (kh % 2 == 0 || kw % 2 == 0) throw std::invalid_argument("Conv2d: kernel extents must be odd");
}

namespace {

// Visits every (kernel tap, output row) pair with the valid column span for
// same padding: out[y][x] pairs with in[y + dy][x + dx] for x in [x0, x1).
template <class F>
void for_each_tap(std::size_t H, std::size_t W, std::size_t kh, std::size_t kw, F&& f) {
  const auto ph = static_cast<std::ptrdiff_t>(kh / 2), pw = static_cast<std::ptrdiff_t>(kw / 2);
  const auto Hs = static_cast<std::ptrdiff_t>(H), Ws = static_cast<std::ptrdiff_t>(W);
  for (std::size_t ky = 0; ky < kh; ++ky) {
    const std::ptrdiff_t dy = static_cast<std::ptrdiff_t>(ky) - ph;
    for (std::size_t kx = 0; kx < kw; ++kx) {
      const std::ptrdiff_t dx = static_cast<std::ptrdiff_t>(kx) - pw;
      const std::ptrdiff_t x0 = std::max<std::ptrdiff_t>(0, -dx), x1 = std::min(Ws, Ws - dx);
      if (x0 >= x1) continue;
      const std::ptrdiff_t y0 = std::max<std::ptrdiff_t>(0, -dy), y1 = std::min(Hs, Hs - dy);
      for (std::ptrdiff_t y = y0; y < y1; ++y) f(ky, kx, y, y + dy, x0, x1, dx);
    }
  }
}

}  // namespace

Tensor Conv2d::forward(const Tensor& x) const {
  const Shape s = x.shape();
  if (s.c != in_ch_) throw std::invalid_argument("Conv2d::forward: channel mismatch");
  Tensor out({s.n, out_ch_, s.h, s.w});
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t o = 0; o < out_ch_; ++o) {
      auto y_plane = out.plane(n, o);
      std::fill(y_plane.begin(), y_plane.end(), bias[o]);
      for (std::size_t i = 0; i < in_ch_; ++i) {
        const auto x_plane = x.plane(n, i);
        const double* wk = &weight[(o * in_ch_ + i) * kh_ * kw_];
        for_each_tap(s.h, s.w, kh_, kw_,
                     [&](std::size_t ky, std::size_t kx, std::ptrdiff_t yo, std::ptrdiff_t yi, std::ptrdiff_t x0,
                         std::ptrdiff_t x1, std::ptrdiff_t dx) {
                       const double wv = wk[ky * kw_ + kx];
                       double* dst = y_plane.data() + yo * static_cast<std::ptrdiff_t>(s.w);
                       const double* src = x_plane.data() + yi * static_cast<std::ptrdiff_t>(s.w) + dx;
                       for (std::ptrdiff_t c = x0; c < x1; ++c) dst[c] += wv * src[c];
                     });
      }
    }
  }
  return out;
}

ConvGrads Conv2d::backward(const Tensor& x, const Tensor& grad_out) const {
  const Shape s = x.shape();
  if (s.c != in_ch_) throw std::invalid_argument("Conv2d::backward: channel mismatch");
  if (!(grad_out.shape() == Shape{s.n, out_ch_, s.h, s.w}))
    throw std::invalid_argument("Conv2d::backward: upstream gradient shape mismatch");

  ConvGrads g{Tensor(s), std::vector<double>(weight.size(), 0.0), std::vector<double>(out_ch_, 0.0)};
  for (std::size_t n = 0; n < s.n; ++n) {
    for (std::size_t o = 0; o < out_ch_; ++o) {
      const auto gy = grad_out.plane(n, o);
      double bsum = 0.0;
      for (double v : gy) bsum += v;
      g.bias[o] += bsum;
      for (std::size_t i = 0; i < in_ch_; ++i) {
        const auto x_plane = x.plane(n, i);
        auto gx_plane = g.input.plane(n, i);
        const std::size_t base = (o * in_ch_ + i) * kh_ * kw_;
        for_each_tap(s.h, s.w, kh_, kw_,
                     [&](std::size_t ky, std::size_t kx, std::ptrdiff_t yo, std::ptrdiff_t yi, std::ptrdiff_t x0,
                         std::ptrdiff_t x1, std::ptrdiff_t dx) {
                       const double wv = weight[base + ky * kw_ + kx];
                       const double* up = gy.data() + yo * static_cast<std::ptrdiff_t>(s.w);
                       const double* src = x_plane.data() + yi * static_cast<std::ptrdiff_t>(s.w) + dx;
                       double* dst = gx_plane.data() + yi * static_cast<std::ptrdiff_t>(s.w) + dx;
                       double acc = 0.0;
                       for (std::ptrdiff_t c = x0; c < x1; ++c) {
                         acc += up[c] * src[c];
                         dst[c] += wv * up[c];
                       }
                       g.weight[base + ky * kw_ + kx] += acc;
                     });
      }
    }
  }
  return g;
}

BatchNorm2d::BatchNorm2d(std::size_t channels, double eps_, double momentum_)
    : gamma(channels, 1.0),
      beta(channels, 0.0),
      running_mean(channels, 0.0),
      running_var(channels, 1.0),
      gamma_grad(channels, 0.0),
      beta_grad(channels, 0.0),
      eps(eps_),
      momentum(momentum_) {
  if (channels == 0) throw std::invalid_argument("BatchNorm2d: zero channels");
}

Tensor BatchNorm2d::forward_train(const Tensor& x, BnCache& cache) {
  const Shape s = x.shape();
  const std::size_t C = channels();
  if (s.c != C) throw std::invalid_argument("BatchNorm2d: channel mismatch");
  const std::size_t count = s.n * s.plane();
  cache.mean.assign(C, 0.0);
  cache.inv_std.assign(C, 0.0);
  cache.x_hat = Tensor(s);
  Tensor out(s);
  for (std::size_t c = 0; c < C; ++c) {
    double sum = 0.0;
    for (std::size_t n = 0; n < s.n; ++n)
      for (double v : x.plane(n, c)) sum += v;
    const double mean = sum / static_cast<double>(count);
    double sq = 0.0;
    for (std::size_t n = 0; n < s.n; ++n)
      for (double v : x.plane(n, c)) sq += (v - mean) * (v - mean);
    const double var = sq / static_cast<double>(count);
    const double inv_std = 1.0 / std::sqrt(var + eps);
    cache.mean[c] = mean;
    cache.inv_std[c] = inv_std;
    for (std::size_t n = 0; n < s.n; ++n) {
      const auto xp = x.plane(n, c);
      auto hp = cache.x_hat.plane(n, c);
      auto yp = out.plane(n, c);
      for (std::size_t k = 0; k < xp.size(); ++k) {
        hp[k] = (xp[k] - mean) * inv_std;
        yp[k] = gamma[c] * hp[k] + beta[c];
      }
    }
    const double unbiased = count > 1 ? sq / static_cast<double>(count - 1) : var;
    running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * mean;
    running_var[c] = (1.0 - momentum) * running_var[c] + momentum * unbiased;
  }
  ++batches_tracked;
  return out;
}

Tensor BatchNorm2d::forward_eval(const Tensor& x) const {
  if (!has_running_stats()) throw std::logic_error("BatchNorm2d: eval mode before any training step");
  const Shape s = x.shape();
  if (s.c != channels()) throw std::invalid_argument("BatchNorm2d: channel mismatch");
  Tensor out(s);
  for (std::size_t c = 0; c < s.c; ++c) {
    const double scale = gamma[c] / std::sqrt(running_var[c] + eps);
    const double shift = beta[c] - running_mean[c] * scale;
    for (std::size_t n = 0; n < s.n; ++n) {
      const auto xp = x.plane(n, c);
      auto yp = out.plane(n, c);
      for (std::size_t k = 0; k < xp.size(); ++k) yp[k] = xp[k] * scale + shift;
    }
  }
  return out;
}

BnGrads BatchNorm2d::backward(const BnCache& cache, const Tensor& grad_out) const {
  const Shape s = grad_out.shape();
  const std::size_t C = channels();
  if (!(s == cache.x_hat.shape())) throw std::invalid_argument("BatchNorm2d::backward: shape mismatch");
  BnGrads g{Tensor(s), std::vector<double>(C, 0.0), std::vector<double>(C, 0.0)};
  const double count = static_cast<double>(s.n * s.plane());
  for (std::size_t c = 0; c < C; ++c) {
    double sum_g = 0.0, sum_gx = 0.0;
    for (std::size_t n = 0; n < s.n; ++n) {
      const auto gp = grad_out.plane(n, c);
      const auto hp = cache.x_hat.plane(n, c);
      for (std::size_t k = 0; k < gp.size(); ++k) {
        sum_g += gp[k];
        sum_gx += gp[k] * hp[k];
      }
    }
    g.beta[c] = sum_g;
    g.gamma[c] = sum_gx;
    const double k1 = gamma[c] * cache.inv_std[c] / count;
    for (std::size_t n = 0; n < s.n; ++n) {
      const auto gp = grad_out.plane(n, c);
      const auto hp = cache.x_hat.plane(n, c);
      auto dp = g.input.plane(n, c);
      for (std::size_t k = 0; k < gp.size(); ++k) dp[k] = k1 * (count * gp[k] - sum_g - hp[k] * sum_gx);
    }
  }
  return g;
}

Tensor relu_forward(const Tensor& x) {
  Tensor out(x.shape());
  auto& d = out.data();
  const auto& s = x.data();
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = s[i] > 0.0 ? s[i] : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  if (!(x.shape() == grad_out.shape())) throw std::invalid_argument("relu_backward: shape mismatch");
  Tensor out(x.shape());
  auto& d = out.data();
  const auto& s = x.data();
  const auto& g = grad_out.data();
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = s[i] > 0.0 ? g[i] : 0.0;
  return out;
}

}  // namespace rmi::nn
