// Thin FFTW wrapper for in-place rank-n complex transforms.

#ifndef TFA_FFT_HPP
#define TFA_FFT_HPP

#include <fftw3.h>

#include <vector>

#include "tfa/common.hpp"

namespace tfa {

/// In-place DFT over a row-major rank-n complex array. sign = FFTW_FORWARD
/// (-1) or FFTW_BACKWARD (+1); no normalization is applied.
inline void dft_inplace(std::vector<cplx>& data, const std::vector<int>& shape, int sign) {
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);
  if (total != data.size()) throw std::invalid_argument("dft_inplace: shape mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), p, p, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

}  // namespace tfa

#endif  // TFA_FFT_HPP
