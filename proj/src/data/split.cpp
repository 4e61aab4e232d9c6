#include "csri/data/split.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "csri/rng.hpp"

namespace csri::data {

std::pair<std::vector<int>, std::vector<int>> split_identities(std::vector<int> identities,
                                                               uint64_t seed) {
    std::sort(identities.begin(), identities.end());
    identities.erase(std::unique(identities.begin(), identities.end()), identities.end());
    if (identities.size() < 2)
        throw std::invalid_argument("split_identities: need >= 2 identities, got " +
                                    std::to_string(identities.size()));

    Rng rng(mix_seed(seed, 0x51d5ULL));
    rng.shuffle(identities);

    size_t n_train = (identities.size() + 1) / 2;  // extra identity goes to train
    std::vector<int> train(identities.begin(), identities.begin() + n_train);
    std::vector<int> test(identities.begin() + n_train, identities.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

SplitManifest build_probe_gallery(const std::vector<FaceRecord>& test_records,
                                  const std::vector<FaceRecord>& distractors, uint64_t seed) {
    std::map<int, std::vector<FaceRecord>> by_id;
    for (const auto& r : test_records) {
        if (!r.identity)
            throw std::invalid_argument("build_probe_gallery: test record '" + r.image_path +
                                        "' lacks a label");
        by_id[*r.identity].push_back(r);
    }
    if (by_id.empty()) throw std::invalid_argument("build_probe_gallery: no test records");
    for (const auto& d : distractors) {
        if (d.identity)
            throw std::invalid_argument("build_probe_gallery: distractor '" + d.image_path +
                                        "' carries a label");
    }

    SplitManifest m;
    m.seed = seed;
    std::vector<FaceRecord> probes, matches;
    for (auto& [id, recs] : by_id) {
        if (recs.size() < 2)
            throw std::invalid_argument("build_probe_gallery: identity " + std::to_string(id) +
                                        " has only " + std::to_string(recs.size()) +
                                        " test image(s); every probe needs a true match");
        std::sort(recs.begin(), recs.end(),
                  [](const FaceRecord& a, const FaceRecord& b) { return a.image_path < b.image_path; });
        Rng rng(mix_seed(seed, static_cast<uint64_t>(id)));
        rng.shuffle(recs);
        size_t n_probe = recs.size() / 2;  // extra image goes to the gallery
        for (size_t i = 0; i < recs.size(); ++i) {
            FaceRecord r = recs[i];
            r.role = i < n_probe ? Role::probe : Role::gallery_match;
            (i < n_probe ? probes : matches).push_back(std::move(r));
        }
    }

    auto by_path = [](const FaceRecord& a, const FaceRecord& b) { return a.image_path < b.image_path; };
    std::sort(probes.begin(), probes.end(), by_path);
    std::sort(matches.begin(), matches.end(), by_path);
    std::vector<FaceRecord> gallery_extra = distractors;
    for (auto& d : gallery_extra) d.role = Role::gallery_distractor;
    std::sort(gallery_extra.begin(), gallery_extra.end(), by_path);

    m.records = std::move(probes);
    m.records.insert(m.records.end(), matches.begin(), matches.end());
    m.records.insert(m.records.end(), gallery_extra.begin(), gallery_extra.end());
    validate(m);
    return m;
}

}  // namespace csri::data
