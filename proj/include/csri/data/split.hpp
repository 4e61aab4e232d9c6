#pragma once

#include <cstdint>
#include <utility>

#include "csri/data/types.hpp"

namespace csri::data {

// Splits a set of identity labels into disjoint train/test halves,
// deterministically under the seed. An odd count puts the extra identity
// into train. Requires >= 2 identities.
std::pair<std::vector<int>, std::vector<int>> split_identities(std::vector<int> identities,
                                                               uint64_t seed);

// Assigns probe / gallery_match roles to the labelled test records
// (per identity with n images: floor(n/2) probes, ceil(n/2) gallery matches,
// assignment randomized under the seed) and appends all distractors to the
// gallery. Every test identity must have >= 2 images; distractors must be
// unlabelled. Record order in the result is deterministic.
SplitManifest build_probe_gallery(const std::vector<FaceRecord>& test_records,
                                  const std::vector<FaceRecord>& distractors, uint64_t seed);

}  // namespace csri::data
