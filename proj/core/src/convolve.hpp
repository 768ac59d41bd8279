#pragma once

#include <vector>

#include "retinexad/image.hpp"

namespace retinexad::detail {

/// Normalized Gaussian taps for offsets -r..r with r = ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Convolves every row with a symmetric odd-length kernel using replicate
/// padding. Wide kernels go through a real FFT of the padded row.
Plane convolve_rows(const Plane& p, const std::vector<double>& kernel);

}  // namespace retinexad::detail
