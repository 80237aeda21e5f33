#pragma once

#include "rmi/config.hpp"
#include "rmi/rd_chain.hpp"
#include "rmi/sim.hpp"

namespace rmi {

/// Sets every masked sample to zero on all antennas.
IfFrame zeroing(const IfFrame& frame);

/// Gap filling by iterative thresholded DFT reconstruction, per ramp and
/// antenna. Ramps without masked samples pass through untouched.
IfFrame imat(const IfFrame& frame, const ImatParams& params = {});

/// Reconstructs one fast-time vector; `gap[n] != 0` marks missing samples.
std::vector<cplx> imat_reconstruct(std::span<const cplx> x, std::span<const std::uint8_t> gap,
                                   const ImatParams& params);

/// Ramp filtering: per range bin, magnitudes are replaced by their minimum
/// over slow time while phases are kept.
SpectrumMatrix rfmin(const SpectrumMatrix& rp);
std::vector<SpectrumMatrix> rfmin(const std::vector<SpectrumMatrix>& rps);

}  // namespace rmi
