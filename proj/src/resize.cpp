#include "csri/resize.hpp"

#include <algorithm>
#include <cmath>

namespace csri {

namespace {

// Keys cubic convolution kernel with a = -0.5.
double cubic_kernel(double t) {
    t = std::fabs(t);
    if (t <= 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
    if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
    return 0.0;
}

// Precomputed filter taps for one axis.
struct AxisTaps {
    std::vector<int> first;       // per output index: first source index (clamped later)
    std::vector<double> weights;  // ntaps weights per output index, normalized
    int ntaps = 0;
};

AxisTaps make_taps(int in_size, int out_size) {
    AxisTaps taps;
    double scale = static_cast<double>(in_size) / out_size;
    double support_scale = std::max(1.0, scale);  // stretch kernel when minifying
    double radius = 2.0 * support_scale;
    taps.ntaps = static_cast<int>(std::ceil(radius)) * 2 + 1;
    taps.first.resize(out_size);
    taps.weights.assign(static_cast<size_t>(out_size) * taps.ntaps, 0.0);

    for (int o = 0; o < out_size; ++o) {
        double center = (o + 0.5) * scale - 0.5;
        int k0 = static_cast<int>(std::floor(center - radius)) + 1;
        taps.first[o] = k0;
        double* w = &taps.weights[static_cast<size_t>(o) * taps.ntaps];
        double sum = 0.0;
        for (int i = 0; i < taps.ntaps; ++i) {
            double t = (k0 + i - center) / support_scale;
            w[i] = cubic_kernel(t);
            sum += w[i];
        }
        for (int i = 0; i < taps.ntaps; ++i) w[i] /= sum;
    }
    return taps;
}

// Resample the last (x) axis of a (ch*h) x w plane set. The accumulation is
// written as first_tap + sum(w_i * (v_i - first_tap)) so that constant input
// rows are reproduced exactly regardless of rounding in the weights.
void apply_taps_x(const double* src, int rows, int in_w, double* dst, int out_w,
                  const AxisTaps& taps) {
    for (int r = 0; r < rows; ++r) {
        const double* s = src + static_cast<size_t>(r) * in_w;
        double* d = dst + static_cast<size_t>(r) * out_w;
        for (int o = 0; o < out_w; ++o) {
            const double* w = &taps.weights[static_cast<size_t>(o) * taps.ntaps];
            int k0 = taps.first[o];
            double base = s[std::clamp(k0, 0, in_w - 1)];
            double acc = 0.0;
            for (int i = 0; i < taps.ntaps; ++i) {
                int k = std::clamp(k0 + i, 0, in_w - 1);
                acc += w[i] * (s[k] - base);
            }
            d[o] = base + acc;
        }
    }
}

Tensor transpose_hw(const Tensor& t) {
    Tensor out(t.ch, t.w, t.h);
    for (int c = 0; c < t.ch; ++c)
        for (int y = 0; y < t.h; ++y)
            for (int x = 0; x < t.w; ++x) out.at(c, x, y) = t.at(c, y, x);
    return out;
}

}  // namespace

Tensor resize_bicubic(const Tensor& src, int out_h, int out_w) {
    if (src.empty()) throw std::invalid_argument("resize_bicubic: empty input");
    if (out_h <= 0 || out_w <= 0) throw std::invalid_argument("resize_bicubic: bad output size");
    if (out_h == src.h && out_w == src.w) return src;

    // horizontal pass
    Tensor mid(src.ch, src.h, out_w);
    AxisTaps tx = make_taps(src.w, out_w);
    apply_taps_x(src.data(), src.ch * src.h, src.w, mid.data(), out_w, tx);

    // vertical pass via transpose
    Tensor mid_t = transpose_hw(mid);
    Tensor out_t(src.ch, out_w, out_h);
    AxisTaps ty = make_taps(src.h, out_h);
    apply_taps_x(mid_t.data(), src.ch * out_w, src.h, out_t.data(), out_h, ty);
    return transpose_hw(out_t);
}

Tensor gaussian_blur(const Tensor& src, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("gaussian_blur: negative sigma");
    if (sigma == 0.0 || src.empty()) return src;

    int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> w(static_cast<size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += w[i + radius];
    }
    for (double& x : w) x /= sum;

    auto pass = [&](const Tensor& t) {
        Tensor out(t.ch, t.h, t.w);
        for (int c = 0; c < t.ch; ++c)
            for (int y = 0; y < t.h; ++y)
                for (int x = 0; x < t.w; ++x) {
                    double base = t.at(c, y, std::clamp(x - radius, 0, t.w - 1));
                    double acc = 0.0;
                    for (int i = -radius; i <= radius; ++i) {
                        int xx = std::clamp(x + i, 0, t.w - 1);
                        acc += w[i + radius] * (t.at(c, y, xx) - base);
                    }
                    out.at(c, y, x) = base + acc;
                }
        return out;
    };

    Tensor horiz = pass(src);
    return transpose_hw(pass(transpose_hw(horiz)));
}

}  // namespace csri
