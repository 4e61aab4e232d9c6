#pragma once

#include "csri/tensor.hpp"

namespace csri {

// Separable bicubic resampling (Keys kernel, a = -0.5), half-pixel centre
// alignment, edge clamp. When minifying, the kernel support is stretched by
// the scale factor (anti-aliased), as done by the common image toolchains.
// Constant images are reproduced exactly.
Tensor resize_bicubic(const Tensor& src, int out_h, int out_w);

// Separable Gaussian blur, radius = ceil(3*sigma), edge clamp.
// sigma == 0 returns the input unchanged.
Tensor gaussian_blur(const Tensor& src, double sigma);

}  // namespace csri
