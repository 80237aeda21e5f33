#include "rmi/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rmi {
namespace {

// fftw_plan_* is not thread-safe; fftw_execute_dft on an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mu_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(std::make_pair(n, sign), p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::span<cplx> data, int sign) {
  if (data.empty()) return;
  fftw_plan p = cache().get(static_cast<int>(data.size()), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, buf, buf);
}

}  // namespace

void fft_inplace(std::span<cplx> data) { run(data, FFTW_FORWARD); }

void ifft_inplace(std::span<cplx> data) {
  run(data, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= inv;
}

void fftshift(std::span<cplx> data) {
  std::rotate(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(data.size() - data.size() / 2), data.end());
}

}  // namespace rmi
