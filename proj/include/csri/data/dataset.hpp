#pragma once

#include <filesystem>
#include <map>

#include "csri/data/manifest.hpp"

namespace csri::data {

// Maps raw identity labels to contiguous class indices (sorted label order).
struct LabelMap {
    std::vector<int> labels;  // sorted, unique

    int index_of(int label) const;
    int classes() const { return static_cast<int>(labels.size()); }
};

LabelMap build_label_map(const std::vector<FaceRecord>& records, Domain domain, Role role);

// Loads the auxiliary training pairs of a manifest. Each auxiliary record's
// path names the *_hr image; the paired *_lr sibling is derived from it.
// Labels are remapped through the LabelMap.
std::vector<LRHRPair> load_aux_pairs(const SplitManifest& m, const std::filesystem::path& base,
                                     const LabelMap& map);

struct NativeTrainSet {
    std::vector<Tensor> images;  // pre-upsampled to the FR input size
    std::vector<int> labels;     // contiguous class indices
};

NativeTrainSet load_native_train(const SplitManifest& m, const std::filesystem::path& base,
                                 const LabelMap& map, int input_size);

struct EvalSet {
    std::vector<Tensor> probe_images;  // raw LR images
    std::vector<int> probe_labels;     // original identity labels
    std::vector<Tensor> gallery_images;
    std::vector<std::optional<int>> gallery_labels;  // nullopt = distractor
};

EvalSet load_eval_set(const SplitManifest& m, const std::filesystem::path& base);

}  // namespace csri::data
