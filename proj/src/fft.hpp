#pragma once

#include <complex>
#include <vector>

namespace ngd::detail {

/// In-place complex DFT of length data.size(). Forward uses e^{-i...};
/// inverse is unnormalized.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

}  // namespace ngd::detail
