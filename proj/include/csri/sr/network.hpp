#pragma once

#include "csri/nn/layers.hpp"

namespace csri::sr {

struct SRNetworkConfig {
    int depth = 6;     // number of convolutional layers, >= 1
    int channels = 32; // feature width of the hidden layers
    int kernel = 3;
    bool residual = true;  // output = input + predicted residual
    int in_channels = 1;
};

// Residual convolutional super-resolution network operating on an LR image
// pre-upsampled to the target size; the output keeps the input shape.
class SRNetwork {
public:
    explicit SRNetwork(const SRNetworkConfig& cfg);

    // Hidden layers get half-He noise, the last layer starts at a tiny scale
    // so the initial mapping is near-identity.
    void init_params(Rng& rng);
    void zero_residual_init();  // residual branch outputs exactly zero

    struct Ctx {
        std::vector<nn::ConvCtx> conv;
        std::vector<nn::ReluCtx> relu;
        Tensor input;
    };

    Tensor forward(const Tensor& x, Ctx* ctx) const;
    // dL/dinput from dL/doutput; accumulates parameter gradients.
    Tensor backward(const Ctx& ctx, const Tensor& dy, bool need_dx);

    void collect(std::vector<nn::Param*>& out);
    const SRNetworkConfig& config() const { return cfg_; }

private:
    SRNetworkConfig cfg_;
    std::vector<nn::Conv2d> convs_;
};

// Mean of squared per-element differences (Eq. mean convention); >= 0,
// zero iff the images are identical. Shapes must match.
double sr_loss(const Tensor& sr, const Tensor& hr);

// d(scale * sr_loss)/d(sr)
Tensor sr_loss_backward(const Tensor& sr, const Tensor& hr, double scale);

// 10*log10(1/mse) with peak 1.0; +infinity for identical images.
double psnr(const Tensor& a, const Tensor& b);

}  // namespace csri::sr
