#include "csri/data/dataset.hpp"

#include <algorithm>

#include "csri/image_io.hpp"
#include "csri/resize.hpp"

namespace csri::data {

int LabelMap::index_of(int label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label)
        throw std::invalid_argument("LabelMap: unknown label " + std::to_string(label));
    return static_cast<int>(it - labels.begin());
}

LabelMap build_label_map(const std::vector<FaceRecord>& records, Domain domain, Role role) {
    LabelMap map;
    for (const auto& r : records)
        if (r.domain == domain && r.role == role && r.identity) map.labels.push_back(*r.identity);
    std::sort(map.labels.begin(), map.labels.end());
    map.labels.erase(std::unique(map.labels.begin(), map.labels.end()), map.labels.end());
    return map;
}

namespace {

std::filesystem::path lr_sibling(const std::filesystem::path& base, const std::string& hr_path) {
    const std::string suffix = "_hr.pgm";
    if (hr_path.size() < suffix.size() ||
        hr_path.compare(hr_path.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw std::runtime_error("auxiliary record '" + hr_path +
                                 "' does not name a *_hr.pgm image");
    std::string lr = hr_path.substr(0, hr_path.size() - suffix.size()) + "_lr.pgm";
    return base / lr;
}

}  // namespace

std::vector<LRHRPair> load_aux_pairs(const SplitManifest& m, const std::filesystem::path& base,
                                     const LabelMap& map) {
    std::vector<LRHRPair> pairs;
    for (const auto& r : m.records) {
        if (r.domain != Domain::auxiliary || r.role != Role::train) continue;
        LRHRPair p;
        p.target_hr = read_image(base / r.image_path);
        p.input_lr = read_image(lr_sibling(base, r.image_path));
        require_same_shape(p.input_lr, p.target_hr, "load_aux_pairs");
        p.identity = map.index_of(*r.identity);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

NativeTrainSet load_native_train(const SplitManifest& m, const std::filesystem::path& base,
                                 const LabelMap& map, int input_size) {
    NativeTrainSet set;
    for (const auto& r : m.records) {
        if (r.domain != Domain::native || r.role != Role::train) continue;
        Tensor img = read_image(base / r.image_path);
        Tensor up = resize_bicubic(img, input_size, input_size);
        up.clamp01();
        set.images.push_back(std::move(up));
        set.labels.push_back(map.index_of(*r.identity));
    }
    return set;
}

EvalSet load_eval_set(const SplitManifest& m, const std::filesystem::path& base) {
    EvalSet set;
    for (const auto& r : m.records) {
        switch (r.role) {
            case Role::probe:
                set.probe_images.push_back(read_image(base / r.image_path));
                set.probe_labels.push_back(*r.identity);
                break;
            case Role::gallery_match:
                set.gallery_images.push_back(read_image(base / r.image_path));
                set.gallery_labels.push_back(*r.identity);
                break;
            case Role::gallery_distractor:
                set.gallery_images.push_back(read_image(base / r.image_path));
                set.gallery_labels.push_back(std::nullopt);
                break;
            case Role::train:
                break;
        }
    }
    return set;
}

}  // namespace csri::data
