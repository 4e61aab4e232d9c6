#include "csri/data/degrade.hpp"

#include "csri/resize.hpp"
#include "csri/rng.hpp"

namespace csri::data {

namespace {

void check_sizes(const Tensor& hr, const DegradationConfig& cfg, const char* what) {
    validate(cfg);
    if (hr.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
    if (hr.h < cfg.lr_height || hr.w < cfg.lr_width)
        throw std::invalid_argument(std::string(what) + ": HR image " + hr.shape_str() +
                                    " smaller than LR target " + std::to_string(cfg.lr_height) +
                                    "x" + std::to_string(cfg.lr_width));
}

}  // namespace

Tensor downsample_clean(const Tensor& hr, const DegradationConfig& cfg) {
    check_sizes(hr, cfg, "downsample_clean");
    Tensor lr = resize_bicubic(hr, cfg.lr_height, cfg.lr_width);
    lr.clamp01();
    return lr;
}

LRHRPair make_lr_hr_pair(const Tensor& hr, const DegradationConfig& cfg, int identity) {
    check_sizes(hr, cfg, "make_lr_hr_pair");
    LRHRPair pair;
    pair.target_hr = hr;
    Tensor lr = downsample_clean(hr, cfg);
    pair.input_lr = resize_bicubic(lr, hr.h, hr.w);
    pair.input_lr.clamp01();
    pair.identity = identity;
    return pair;
}

Tensor degrade_native(const Tensor& hr, const DegradationConfig& cfg) {
    check_sizes(hr, cfg, "degrade_native");
    Tensor blurred = cfg.blur_sigma > 0.0 ? gaussian_blur(hr, cfg.blur_sigma) : hr;
    Tensor lr = resize_bicubic(blurred, cfg.lr_height, cfg.lr_width);
    lr.clamp01();
    if (cfg.noise_sigma > 0.0) {
        Rng rng(cfg.seed);
        for (double& x : lr.v) x += rng.normal(0.0, cfg.noise_sigma);
        lr.clamp01();
    }
    return lr;
}

}  // namespace csri::data
