#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csri/tensor.hpp"

namespace csri::data {

enum class Domain { auxiliary, native };
enum class Role { train, probe, gallery_match, gallery_distractor };

const char* to_string(Domain d);
const char* to_string(Role r);
Domain domain_from_string(const std::string& s);
Role role_from_string(const std::string& s);

// One image in the corpus. Distractors are exactly the unlabelled records.
struct FaceRecord {
    std::string image_path;  // relative to the manifest's base directory
    std::optional<int> identity;
    Domain domain = Domain::native;
    Role role = Role::train;

    bool operator==(const FaceRecord&) const = default;
};

// Auxiliary training sample: pre-upsampled low-resolution input and the
// high-resolution target at the same size, with the identity label.
struct LRHRPair {
    Tensor input_lr;
    Tensor target_hr;
    int identity = -1;
};

struct DegradationConfig {
    int lr_height = 20;  // mean low-resolution face size
    int lr_width = 16;
    double blur_sigma = 1.0;   // Gaussian std in source pixels, native domain only
    double noise_sigma = 0.02; // additive Gaussian std in [0,1] intensity units
    uint64_t seed = 0;
};

// Throws std::invalid_argument when the config violates the low-resolution
// criterion (<= 32x32) or has negative sigmas.
void validate(const DegradationConfig& cfg);

struct RoleCounts {
    size_t train = 0, probe = 0, gallery_match = 0, gallery_distractor = 0;
    size_t total() const { return train + probe + gallery_match + gallery_distractor; }
    bool operator==(const RoleCounts&) const = default;
};

struct SplitManifest {
    std::string dataset;
    uint64_t seed = 0;
    std::string config_hash;  // optional provenance stamp
    std::vector<FaceRecord> records;

    RoleCounts counts() const;
    bool operator==(const SplitManifest&) const = default;
};

// Enforces the manifest invariants:
//  - gallery_distractor <=> identity absent, all other roles labelled
//  - every probe identity appears among gallery_match records
// Throws std::invalid_argument naming the offending record.
void validate(const SplitManifest& m);

}  // namespace csri::data
