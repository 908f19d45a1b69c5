// Thin FFTW wrapper with a process-wide, mutex-guarded plan cache.
#pragma once

#include "boussinesq/grid.hpp"

namespace boussinesq::detail {

enum class FftDirection { kForward, kBackward };

/// Unnormalised in-place n-dimensional transform of grid.size() values.
/// Forward uses exp(-i k.x), backward exp(+i k.x).
void fft_inplace(const GridSpec& grid, Complex* data, FftDirection direction);

}  // namespace boussinesq::detail
