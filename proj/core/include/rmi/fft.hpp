#pragma once

#include <span>

#include "rmi/types.hpp"

namespace rmi {

/// In-place unnormalized forward DFT, X[k] = sum_n x[n] exp(-2 pi j k n / N).
void fft_inplace(std::span<cplx> data);
/// In-place inverse DFT including the 1/N factor.
void ifft_inplace(std::span<cplx> data);

/// Swaps the two halves so index N/2 holds the zero-frequency bin.
void fftshift(std::span<cplx> data);

}  // namespace rmi
