#pragma once

#include <cstdint>
#include <filesystem>

#include "csri/tensor.hpp"

namespace csri::synth {

// Procedurally generated face-like corpus: each identity is a parameter
// vector (head shape, skin tone, hair, eye spacing, brow angle, nose, mouth
// geometry) and each image adds nuisance variation (translation, scale, yaw
// shift, brightness/contrast, illumination gradient). Grayscale, [0,1].
struct CorpusSpec {
    int identities = 41;
    int images_per_identity = 10;
    int image_size = 64;
    int distractor_images = 200;  // one-off identities, stored unlabelled
    uint64_t seed = 5;
};

Tensor render_face(int size, uint64_t identity_seed, uint64_t instance_seed);

// Writes out_dir/id_XXXX/img_XXX.pgm for labelled identities and
// out_dir/distractors/d_XXXXX.pgm for the unlabelled pool. Deterministic:
// identical spec produces byte-identical files.
void generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

}  // namespace csri::synth
