#pragma once

#include "csri/data/types.hpp"

namespace csri::data {

// Clean bicubic downsample of an HR image to the configured LR size,
// clamped to [0,1]. Shared by both domain synthesizers.
Tensor downsample_clean(const Tensor& hr, const DegradationConfig& cfg);

// Builds an auxiliary training pair: target_hr = hr, input_lr = the HR image
// bicubic-downsampled to (lr_height, lr_width) and re-upsampled back to the
// HR size. Both tensors share the HR shape and live in [0,1].
LRHRPair make_lr_hr_pair(const Tensor& hr, const DegradationConfig& cfg, int identity = -1);

// Manufactures a native-like LR image: Gaussian blur at HR scale, bicubic
// downsample, additive Gaussian noise (seeded by cfg.seed), clamp to [0,1].
// The returned image is at LR size; the HR original is not retained.
Tensor degrade_native(const Tensor& hr, const DegradationConfig& cfg);

}  // namespace csri::data
