#pragma once

#include <filesystem>

#include "csri/tensor.hpp"

namespace csri {

// Reads a PGM (P2/P5) or PPM (P3/P6) image into a [0,1] float tensor,
// 1 channel for PGM and 3 for PPM. Throws std::runtime_error on malformed input.
Tensor read_image(const std::filesystem::path& file);

// Writes a 1-channel tensor as binary PGM or a 3-channel tensor as binary PPM,
// 8 bits per sample, values clamped to [0,1] and rounded. Output bytes are
// a pure function of the tensor, suitable for byte-identity checks.
void write_image(const std::filesystem::path& file, const Tensor& img);

}  // namespace csri
