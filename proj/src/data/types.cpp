#include "csri/data/types.hpp"

#include <stdexcept>
#include <unordered_set>

namespace csri::data {

const char* to_string(Domain d) {
    return d == Domain::auxiliary ? "aux" : "native";
}

const char* to_string(Role r) {
    switch (r) {
        case Role::train: return "train";
        case Role::probe: return "probe";
        case Role::gallery_match: return "gallery_match";
        case Role::gallery_distractor: return "gallery_distractor";
    }
    return "?";
}

Domain domain_from_string(const std::string& s) {
    if (s == "aux") return Domain::auxiliary;
    if (s == "native") return Domain::native;
    throw std::invalid_argument("unknown domain '" + s + "'");
}

Role role_from_string(const std::string& s) {
    if (s == "train") return Role::train;
    if (s == "probe") return Role::probe;
    if (s == "gallery_match") return Role::gallery_match;
    if (s == "gallery_distractor") return Role::gallery_distractor;
    throw std::invalid_argument("unknown role '" + s + "'");
}

void validate(const DegradationConfig& cfg) {
    if (cfg.lr_height < 1 || cfg.lr_width < 1)
        throw std::invalid_argument("DegradationConfig: LR size must be positive");
    if (cfg.lr_height > 32 || cfg.lr_width > 32)
        throw std::invalid_argument("DegradationConfig: LR size must be <= 32x32, got " +
                                    std::to_string(cfg.lr_height) + "x" +
                                    std::to_string(cfg.lr_width));
    if (cfg.blur_sigma < 0.0 || cfg.noise_sigma < 0.0)
        throw std::invalid_argument("DegradationConfig: sigmas must be >= 0");
}

RoleCounts SplitManifest::counts() const {
    RoleCounts c;
    for (const auto& r : records) {
        switch (r.role) {
            case Role::train: ++c.train; break;
            case Role::probe: ++c.probe; break;
            case Role::gallery_match: ++c.gallery_match; break;
            case Role::gallery_distractor: ++c.gallery_distractor; break;
        }
    }
    return c;
}

void validate(const SplitManifest& m) {
    std::unordered_set<int> gallery_ids;
    for (const auto& r : m.records) {
        bool labelled = r.identity.has_value();
        if (r.role == Role::gallery_distractor && labelled)
            throw std::invalid_argument("manifest '" + m.dataset + "': distractor record '" +
                                        r.image_path + "' carries a label");
        if (r.role != Role::gallery_distractor && !labelled)
            throw std::invalid_argument("manifest '" + m.dataset + "': record '" + r.image_path +
                                        "' with role " + to_string(r.role) + " lacks a label");
        if (labelled && *r.identity < 0)
            throw std::invalid_argument("manifest '" + m.dataset + "': record '" + r.image_path +
                                        "' has a negative label");
        if (r.role == Role::gallery_match) gallery_ids.insert(*r.identity);
    }
    for (const auto& r : m.records) {
        if (r.role == Role::probe && !gallery_ids.count(*r.identity))
            throw std::invalid_argument("manifest '" + m.dataset + "': probe identity " +
                                        std::to_string(*r.identity) +
                                        " has no gallery_match record");
    }
}

}  // namespace csri::data
