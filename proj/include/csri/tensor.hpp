#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace csri {

// Dense channels-first image tensor (ch x h x w), double precision,
// values typically in [0,1] for images but unconstrained for activations.
struct Tensor {
    int ch = 0;
    int h = 0;
    int w = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int ch_, int h_, int w_)
        : ch(ch_), h(h_), w(w_), v(static_cast<size_t>(ch_) * h_ * w_, 0.0) {
        if (ch_ < 0 || h_ < 0 || w_ < 0)
            throw std::invalid_argument("Tensor: negative dimension");
    }

    size_t size() const { return v.size(); }
    bool empty() const { return v.empty(); }

    double& at(int c, int y, int x) {
        assert(c >= 0 && c < ch && y >= 0 && y < h && x >= 0 && x < w);
        return v[(static_cast<size_t>(c) * h + y) * w + x];
    }
    double at(int c, int y, int x) const {
        assert(c >= 0 && c < ch && y >= 0 && y < h && x >= 0 && x < w);
        return v[(static_cast<size_t>(c) * h + y) * w + x];
    }

    double* data() { return v.data(); }
    const double* data() const { return v.data(); }

    // channel plane start (contiguous h*w block)
    double* plane(int c) { return v.data() + static_cast<size_t>(c) * h * w; }
    const double* plane(int c) const { return v.data() + static_cast<size_t>(c) * h * w; }

    bool same_shape(const Tensor& o) const { return ch == o.ch && h == o.h && w == o.w; }

    std::string shape_str() const {
        return std::to_string(ch) + "x" + std::to_string(h) + "x" + std::to_string(w);
    }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }

    void add_inplace(const Tensor& o) {
        assert(same_shape(o));
        for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    }

    void clamp01() {
        for (double& x : v) x = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
    }
};

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": shape mismatch " + a.shape_str() +
                                    " vs " + b.shape_str());
}

}  // namespace csri
