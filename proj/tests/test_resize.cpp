#include "doctest.h"

#include "csri/data/degrade.hpp"
#include "csri/resize.hpp"
#include "test_util.hpp"

using namespace csri;
using csri::test::ramp_image;

TEST_CASE("bicubic resize preserves constant images exactly") {
    Tensor c(1, 64, 64);
    c.fill(0.5);
    Tensor down = resize_bicubic(c, 16, 16);
    for (double v : down.v) CHECK(v == 0.5);
    Tensor up = resize_bicubic(down, 64, 64);
    for (double v : up.v) CHECK(v == 0.5);

    // non-dyadic sizes as well
    Tensor c2(1, 37, 23);
    c2.fill(0.731);
    Tensor r2 = resize_bicubic(c2, 20, 16);
    for (double v : r2.v) CHECK(v == 0.731);
}

TEST_CASE("bicubic resize shape contract and identity") {
    Tensor img = ramp_image(1, 64, 64);
    Tensor lr = resize_bicubic(img, 16, 16);
    CHECK(lr.ch == 1);
    CHECK(lr.h == 16);
    CHECK(lr.w == 16);

    Tensor same = resize_bicubic(img, 64, 64);
    CHECK(same.v == img.v);

    CHECK_THROWS_AS(resize_bicubic(img, 0, 5), std::invalid_argument);
}

TEST_CASE("bicubic upsample interpolates smoothly between samples") {
    // a linear ramp should be reproduced closely by the a=-0.5 kernel
    Tensor img(1, 1, 16);
    for (int x = 0; x < 16; ++x) img.at(0, 0, x) = x / 15.0;
    Tensor up = resize_bicubic(img, 1, 64);
    for (int x = 8; x < 56; ++x) {  // interior, away from clamped borders
        double src = (x + 0.5) * 16.0 / 64.0 - 0.5;
        CHECK(std::fabs(up.at(0, 0, x) - src / 15.0) < 1e-12);
    }
}

TEST_CASE("gaussian blur basics") {
    Tensor img = ramp_image(1, 32, 32);
    Tensor same = gaussian_blur(img, 0.0);
    CHECK(same.v == img.v);

    Tensor c(1, 16, 16);
    c.fill(0.25);
    Tensor blurred = gaussian_blur(c, 1.3);
    for (double v : blurred.v) CHECK(v == 0.25);

    // blurring reduces total variation on a non-constant image
    Tensor b = gaussian_blur(img, 1.0);
    auto tv = [](const Tensor& t) {
        double acc = 0;
        for (int y = 0; y < t.h; ++y)
            for (int x = 0; x + 1 < t.w; ++x) acc += std::fabs(t.at(0, y, x + 1) - t.at(0, y, x));
        return acc;
    };
    CHECK(tv(b) < tv(img));
    CHECK_THROWS_AS(gaussian_blur(img, -1.0), std::invalid_argument);
}

TEST_CASE("make_lr_hr_pair contract") {
    data::DegradationConfig cfg;
    SUBCASE("defaults follow the mean LR face size") {
        CHECK(cfg.lr_height == 20);
        CHECK(cfg.lr_width == 16);
        CHECK(cfg.blur_sigma == 1.0);
        CHECK(cfg.noise_sigma == 0.02);
    }

    cfg.lr_height = 16;
    cfg.lr_width = 16;
    Tensor hr = ramp_image(1, 64, 64);
    data::LRHRPair pair = data::make_lr_hr_pair(hr, cfg, 3);
    CHECK(pair.input_lr.same_shape(pair.target_hr));
    CHECK(pair.target_hr.v == hr.v);
    CHECK(pair.identity == 3);
    for (double v : pair.input_lr.v) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    // the intermediate LR really is 16x16: reconstruct and compare
    Tensor lr = data::downsample_clean(hr, cfg);
    CHECK(lr.h == 16);
    CHECK(lr.w == 16);
    Tensor up = resize_bicubic(lr, 64, 64);
    up.clamp01();
    CHECK(up.v == pair.input_lr.v);

    SUBCASE("constant image is reproduced exactly") {
        Tensor c(1, 64, 64);
        c.fill(0.5);
        data::LRHRPair p = data::make_lr_hr_pair(c, cfg);
        CHECK(p.input_lr.v == p.target_hr.v);
    }

    SUBCASE("LR larger than HR is rejected") {
        Tensor small(1, 12, 12);
        CHECK_THROWS_AS(data::make_lr_hr_pair(small, cfg), std::invalid_argument);
    }
}

TEST_CASE("degrade_native degenerate and seeded behaviour") {
    data::DegradationConfig cfg;
    cfg.lr_height = 16;
    cfg.lr_width = 16;
    Tensor hr = ramp_image(1, 64, 64);

    SUBCASE("blur=0 noise=0 equals the clean downsample pixel-for-pixel") {
        cfg.blur_sigma = 0.0;
        cfg.noise_sigma = 0.0;
        Tensor a = data::degrade_native(hr, cfg);
        Tensor b = data::downsample_clean(hr, cfg);
        CHECK(a.v == b.v);
    }

    SUBCASE("seeded noise is bitwise deterministic") {
        cfg.noise_sigma = 0.02;
        cfg.seed = 99;
        Tensor a = data::degrade_native(hr, cfg);
        Tensor b = data::degrade_native(hr, cfg);
        CHECK(a.v == b.v);
        cfg.seed = 100;
        Tensor c = data::degrade_native(hr, cfg);
        CHECK(a.v != c.v);
    }

    SUBCASE("blur creates a measurable gap versus the clean downsample") {
        cfg.blur_sigma = 1.0;
        cfg.noise_sigma = 0.0;
        Tensor a = data::degrade_native(hr, cfg);
        Tensor clean = data::downsample_clean(hr, cfg);
        double mean_diff = 0.0;
        for (size_t i = 0; i < a.v.size(); ++i) mean_diff += std::fabs(a.v[i] - clean.v[i]);
        mean_diff /= a.v.size();
        CHECK(mean_diff > 0.0);
    }
}

TEST_CASE("degradation config validation") {
    data::DegradationConfig cfg;
    cfg.lr_height = 33;
    CHECK_THROWS_AS(data::validate(cfg), std::invalid_argument);
    cfg.lr_height = 20;
    cfg.noise_sigma = -0.1;
    CHECK_THROWS_AS(data::validate(cfg), std::invalid_argument);
    cfg.noise_sigma = 0.0;
    cfg.lr_width = 0;
    CHECK_THROWS_AS(data::validate(cfg), std::invalid_argument);
}
