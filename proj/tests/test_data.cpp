#include "doctest.h"

#include <set>

#include "csri/data/dataset.hpp"
#include "csri/data/manifest.hpp"
#include "csri/data/split.hpp"
#include "test_util.hpp"

using namespace csri;
using namespace csri::data;

namespace {

std::vector<int> iota_labels(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

FaceRecord rec(const std::string& path, std::optional<int> id, Domain d, Role r) {
    return FaceRecord{path, id, d, r};
}

}  // namespace

TEST_CASE("split_identities halves known identity sets") {
    auto [train, test] = split_identities(iota_labels(5139), 42);
    CHECK(train.size() == 2570);
    CHECK(test.size() == 2569);

    auto [t41, e41] = split_identities(iota_labels(41), 7);
    CHECK(t41.size() == 21);
    CHECK(e41.size() == 20);
}

TEST_CASE("split_identities determinism and disjointness") {
    auto a = split_identities(iota_labels(100), 5);
    auto b = split_identities(iota_labels(100), 5);
    CHECK(a == b);

    Rng rng(77);
    for (int it = 0; it < 100; ++it) {
        int n = 2 + rng.uniform_int(200);
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) labels.push_back(rng.uniform_int(10000));
        std::set<int> unique(labels.begin(), labels.end());
        if (unique.size() < 2) continue;
        auto [train, test] = split_identities(labels, rng.next_u64());
        CHECK(train.size() == (unique.size() + 1) / 2);
        CHECK(train.size() + test.size() == unique.size());
        std::set<int> seen;
        for (int id : train) CHECK(seen.insert(id).second);
        for (int id : test) CHECK(seen.insert(id).second);
        CHECK(seen == unique);
    }
}

TEST_CASE("split_identities rejects degenerate input") {
    CHECK_THROWS_AS(split_identities({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_identities({5}, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_identities({5, 5, 5}, 1), std::invalid_argument);
}

TEST_CASE("build_probe_gallery floor/ceil assignment") {
    std::vector<FaceRecord> test_records;
    for (int i = 0; i < 5; ++i)
        test_records.push_back(rec("id7/img" + std::to_string(i) + ".pgm", 7, Domain::native,
                                   Role::train));
    SplitManifest m = build_probe_gallery(test_records, {}, 3);
    RoleCounts c = m.counts();
    CHECK(c.probe == 2);
    CHECK(c.gallery_match == 3);
    CHECK(c.gallery_distractor == 0);

    SUBCASE("deterministic under the seed") {
        SplitManifest m2 = build_probe_gallery(test_records, {}, 3);
        CHECK(m.records == m2.records);
    }
}

TEST_CASE("build_probe_gallery guards") {
    std::vector<FaceRecord> one{rec("id3/a.pgm", 3, Domain::native, Role::train)};
    CHECK_THROWS_WITH_AS(build_probe_gallery(one, {}, 1), doctest::Contains("identity 3"),
                         std::invalid_argument);

    std::vector<FaceRecord> ok{rec("id1/a.pgm", 1, Domain::native, Role::train),
                               rec("id1/b.pgm", 1, Domain::native, Role::train)};
    std::vector<FaceRecord> bad_distractor{rec("d/a.pgm", 5, Domain::native, Role::train)};
    CHECK_THROWS_AS(build_probe_gallery(ok, bad_distractor, 1), std::invalid_argument);

    std::vector<FaceRecord> unlabeled{rec("id/a.pgm", std::nullopt, Domain::native, Role::train)};
    CHECK_THROWS_AS(build_probe_gallery(unlabeled, {}, 1), std::invalid_argument);
}

TEST_CASE("every probe identity has a gallery match") {
    Rng rng(11);
    for (int it = 0; it < 30; ++it) {
        std::vector<FaceRecord> recs;
        int ids = 2 + rng.uniform_int(6);
        for (int id = 0; id < ids; ++id) {
            int n = 2 + rng.uniform_int(5);
            for (int i = 0; i < n; ++i)
                recs.push_back(rec("id" + std::to_string(id) + "/i" + std::to_string(i) + ".pgm",
                                   id, Domain::native, Role::train));
        }
        SplitManifest m = build_probe_gallery(recs, {}, rng.next_u64());
        std::set<int> gallery_ids;
        for (const auto& r : m.records)
            if (r.role == Role::gallery_match) gallery_ids.insert(*r.identity);
        for (const auto& r : m.records)
            if (r.role == Role::probe) CHECK(gallery_ids.count(*r.identity) == 1);
    }
}

TEST_CASE("manifest round-trip is exact") {
    test::TempDir tmp("manifest");
    SplitManifest m;
    m.dataset = "roundtrip";
    m.seed = 123456789ULL;
    m.config_hash = "deadbeef00112233";
    m.records = {
        rec("images/aux/id_0001/img_000_hr.pgm", 1, Domain::auxiliary, Role::train),
        rec("images/native/train/id_0001/img_001.pgm", 1, Domain::native, Role::train),
        rec("images/native/test/id_0002/img_000.pgm", 2, Domain::native, Role::probe),
        rec("images/native/test/id_0002/img_001.pgm", 2, Domain::native, Role::gallery_match),
        rec("images/native/distractor/d_00000.pgm", std::nullopt, Domain::native,
            Role::gallery_distractor),
    };
    auto file = tmp.path / "m.tsv";
    write_manifest(m, file);
    SplitManifest loaded = load_manifest(file);
    CHECK(loaded == m);

    SUBCASE("empty manifest is valid") {
        SplitManifest empty;
        empty.dataset = "empty";
        empty.seed = 1;
        auto f2 = tmp.path / "empty.tsv";
        write_manifest(empty, f2);
        CHECK(load_manifest(f2) == empty);
    }
}

TEST_CASE("manifest invariant and parse failures carry line numbers") {
    test::TempDir tmp("manifest_bad");
    auto file = tmp.path / "bad.tsv";

    SUBCASE("labelled distractor is rejected") {
        std::ofstream out(file);
        out << "# csri-manifest v1\n# dataset x\n# seed 1\n";
        out << "a.pgm\t5\tnative\tgallery_distractor\n";
        out.close();
        CHECK_THROWS_WITH_AS(load_manifest(file), doctest::Contains(":4:"), std::runtime_error);
    }
    SUBCASE("missing fields are rejected") {
        std::ofstream out(file);
        out << "a.pgm\t5\tnative\n";
        out.close();
        CHECK_THROWS_WITH_AS(load_manifest(file), doctest::Contains(":1:"), std::runtime_error);
    }
    SUBCASE("probe without gallery match is rejected") {
        std::ofstream out(file);
        out << "a.pgm\t5\tnative\tprobe\n";
        out.close();
        CHECK_THROWS_AS(load_manifest(file), std::invalid_argument);
    }
    SUBCASE("declared counts must match") {
        std::ofstream out(file);
        out << "# counts train=2 probe=0 gallery_match=0 gallery_distractor=0\n";
        out << "a.pgm\t5\tnative\ttrain\n";
        out.close();
        CHECK_THROWS_AS(load_manifest(file), std::runtime_error);
    }
}

TEST_CASE("label map") {
    std::vector<FaceRecord> recs = {
        rec("a", 30, Domain::auxiliary, Role::train),
        rec("b", 10, Domain::auxiliary, Role::train),
        rec("c", 30, Domain::auxiliary, Role::train),
        rec("d", 20, Domain::native, Role::train),
    };
    LabelMap map = build_label_map(recs, Domain::auxiliary, Role::train);
    CHECK(map.classes() == 2);
    CHECK(map.index_of(10) == 0);
    CHECK(map.index_of(30) == 1);
    CHECK_THROWS_AS(map.index_of(20), std::invalid_argument);
}
