#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "csri/rng.hpp"
#include "csri/tensor.hpp"

namespace csri::nn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using MatRM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One named parameter tensor with its gradient accumulator and SGD momentum
// buffer. Values are stored flat; layers map them to the shapes they need.
struct Param {
    std::string name;
    std::vector<int> shape;
    bool decay = true;  // weight decay applies (off for biases)
    Vec value, grad, mom;

    void resize(std::vector<int> shape_in) {
        shape = std::move(shape_in);
        long n = 1;
        for (int d : shape) n *= d;
        value = Vec::Zero(n);
        grad = Vec::Zero(n);
        mom = Vec::Zero(n);
    }
    long size() const { return value.size(); }
};

void init_normal(Param& p, Rng& rng, double std);
inline double he_std(int fan_in) { return std::sqrt(2.0 / fan_in); }

struct SgdConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    double weight_decay = 5e-4;
};

// v <- momentum*v - lr*(g + wd*w); w <- w + v. Deterministic in list order.
// clip_norm > 0 rescales the whole gradient set to that global L2 norm first
// (the usual stabilizer for residual SR training at high learning rates).
void sgd_step(const std::vector<Param*>& params, const SgdConfig& cfg, double lr,
              double clip_norm = 0.0);
void zero_grads(const std::vector<Param*>& params);

// ---------------------------------------------------------------------------
// Layers. forward() is const and writes everything backward() needs into a
// caller-owned context, so several forwards can be in flight on shared
// parameters (the two CSRI branches). backward() accumulates into grad.
// ---------------------------------------------------------------------------

struct ConvCtx {
    Tensor x;
};

// 3x3-style convolution, stride 1, zero padding k/2 (output size == input size).
class Conv2d {
public:
    Conv2d(std::string name, int in_ch, int out_ch, int k);

    Tensor forward(const Tensor& x, ConvCtx* ctx) const;
    // Returns dL/dx when need_dx; accumulates dL/dweight, dL/dbias.
    Tensor backward(const ConvCtx& ctx, const Tensor& dy, bool need_dx);

    void collect(std::vector<Param*>& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }

    int in_ch, out_ch, k, pad;
    Param weight;  // (out_ch, in_ch*k*k)
    Param bias;    // (out_ch)
};

struct ReluCtx {
    Tensor y;
};

Tensor relu(const Tensor& x, ReluCtx* ctx);
Tensor relu_backward(const ReluCtx& ctx, const Tensor& dy);

struct PoolCtx {
    int in_ch = 0, in_h = 0, in_w = 0;
    std::vector<int32_t> argmax;  // flat input index per output element
};

// 2x2 max pooling, stride 2; input sides must be even. Ties resolve to the
// first element in scan order.
Tensor maxpool2(const Tensor& x, PoolCtx* ctx);
Tensor maxpool2_backward(const PoolCtx& ctx, const Tensor& dy);

struct LinearCtx {
    Vec x;
};

class Linear {
public:
    Linear(std::string name, int in_dim, int out_dim);

    Vec forward(const Vec& x, LinearCtx* ctx) const;
    Vec backward(const LinearCtx& ctx, const Vec& dy, bool need_dx);

    void collect(std::vector<Param*>& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }

    int in_dim, out_dim;
    Param weight;  // (out_dim, in_dim)
    Param bias;    // (out_dim)
};

inline Vec flatten(const Tensor& t) {
    return Eigen::Map<const Vec>(t.data(), static_cast<long>(t.size()));
}

inline Tensor unflatten(const Vec& v, int ch, int h, int w) {
    Tensor t(ch, h, w);
    Eigen::Map<Vec>(t.data(), static_cast<long>(t.size())) = v;
    return t;
}

}  // namespace csri::nn
