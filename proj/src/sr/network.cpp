#include "csri/sr/network.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csri::sr {

SRNetwork::SRNetwork(const SRNetworkConfig& cfg) : cfg_(cfg) {
    if (cfg.depth < 1) throw std::invalid_argument("SRNetwork: depth must be >= 1");
    if (cfg.channels < 1 || cfg.in_channels < 1)
        throw std::invalid_argument("SRNetwork: channels must be >= 1");
    convs_.reserve(cfg.depth);
    for (int i = 0; i < cfg.depth; ++i) {
        int in = i == 0 ? cfg.in_channels : cfg.channels;
        int out = i == cfg.depth - 1 ? cfg.in_channels : cfg.channels;
        convs_.emplace_back("sr.conv" + std::to_string(i), in, out, cfg.kernel);
    }
}

void SRNetwork::init_params(Rng& rng) {
    for (size_t i = 0; i < convs_.size(); ++i) {
        int fan_in = convs_[i].in_ch * convs_[i].k * convs_[i].k;
        double std = nn::he_std(fan_in) * 0.5;
        if (i + 1 == convs_.size()) std = 1e-3;  // near-identity start
        nn::init_normal(convs_[i].weight, rng, std);
        convs_[i].bias.value.setZero();
    }
}

void SRNetwork::zero_residual_init() {
    convs_.back().weight.value.setZero();
    convs_.back().bias.value.setZero();
}

Tensor SRNetwork::forward(const Tensor& x, Ctx* ctx) const {
    if (x.ch != cfg_.in_channels)
        throw std::invalid_argument("SRNetwork: expected " + std::to_string(cfg_.in_channels) +
                                    " channel input, got " + x.shape_str());
    if (ctx) {
        ctx->conv.resize(convs_.size());
        ctx->relu.resize(convs_.size() > 0 ? convs_.size() - 1 : 0);
        ctx->input = x;
    }
    Tensor h = x;
    for (size_t i = 0; i < convs_.size(); ++i) {
        h = convs_[i].forward(h, ctx ? &ctx->conv[i] : nullptr);
        if (i + 1 < convs_.size()) h = nn::relu(h, ctx ? &ctx->relu[i] : nullptr);
    }
    if (cfg_.residual) h.add_inplace(x);
    return h;
}

Tensor SRNetwork::backward(const Ctx& ctx, const Tensor& dy, bool need_dx) {
    Tensor d = dy;
    for (size_t i = convs_.size(); i-- > 0;) {
        bool need = need_dx || i > 0;
        if (i + 1 < convs_.size()) d = nn::relu_backward(ctx.relu[i], d);
        d = convs_[i].backward(ctx.conv[i], d, need);
    }
    if (cfg_.residual && need_dx) d.add_inplace(dy);
    return d;
}

void SRNetwork::collect(std::vector<nn::Param*>& out) {
    for (auto& c : convs_) c.collect(out);
}

double sr_loss(const Tensor& sr, const Tensor& hr) {
    require_same_shape(sr, hr, "sr_loss");
    double acc = 0.0;
    for (size_t i = 0; i < sr.v.size(); ++i) {
        double d = sr.v[i] - hr.v[i];
        acc += d * d;
    }
    return acc / static_cast<double>(sr.v.size());
}

Tensor sr_loss_backward(const Tensor& sr, const Tensor& hr, double scale) {
    require_same_shape(sr, hr, "sr_loss_backward");
    Tensor g(sr.ch, sr.h, sr.w);
    double f = 2.0 * scale / static_cast<double>(sr.v.size());
    for (size_t i = 0; i < sr.v.size(); ++i) g.v[i] = f * (sr.v[i] - hr.v[i]);
    return g;
}

double psnr(const Tensor& a, const Tensor& b) {
    double mse = sr_loss(a, b);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

}  // namespace csri::sr
