#include "csri/fr/network.hpp"

#include <cmath>
#include <stdexcept>

namespace csri::fr {

namespace {

int pooled_size(const FRNetworkConfig& cfg) {
    int s = cfg.input_size;
    for (size_t i = 0; i < cfg.trunk_channels.size(); ++i) {
        if (s % 2 != 0)
            throw std::invalid_argument("FRNetwork: input_size " +
                                        std::to_string(cfg.input_size) +
                                        " not divisible by 2^blocks");
        s /= 2;
    }
    return s;
}

std::vector<nn::Conv2d> make_trunk(const FRNetworkConfig& cfg) {
    if (cfg.trunk_channels.empty())
        throw std::invalid_argument("FRNetwork: trunk needs at least one block");
    if (cfg.embedding_dim < 1) throw std::invalid_argument("FRNetwork: embedding_dim must be > 0");
    if (cfg.syn_classes < 1 || cfg.nat_classes < 1)
        throw std::invalid_argument("FRNetwork: both heads need a positive class count");
    std::vector<nn::Conv2d> convs;
    int in = cfg.in_channels;
    for (size_t i = 0; i < cfg.trunk_channels.size(); ++i) {
        convs.emplace_back("fr.trunk.conv" + std::to_string(i), in, cfg.trunk_channels[i],
                           cfg.kernel);
        in = cfg.trunk_channels[i];
    }
    return convs;
}

}  // namespace

FRNetwork::FRNetwork(const FRNetworkConfig& cfg)
    : cfg_(cfg),
      convs_(make_trunk(cfg)),
      feat_ch_(cfg.trunk_channels.back()),
      feat_hw_(pooled_size(cfg) * pooled_size(cfg)),
      fc_("fr.trunk.fc", feat_ch_ * feat_hw_, cfg.embedding_dim),
      head_syn_("fr.head.syn", cfg.embedding_dim, cfg.syn_classes),
      head_nat_("fr.head.nat", cfg.embedding_dim, cfg.nat_classes) {}

void FRNetwork::init_params(Rng& rng) {
    for (auto& c : convs_) {
        nn::init_normal(c.weight, rng, nn::he_std(c.in_ch * c.k * c.k));
        c.bias.value.setConstant(0.01);
    }
    nn::init_normal(fc_.weight, rng, std::sqrt(1.0 / fc_.in_dim));
    fc_.bias.value.setZero();
    nn::init_normal(head_syn_.weight, rng, std::sqrt(1.0 / head_syn_.in_dim));
    head_syn_.bias.value.setZero();
    nn::init_normal(head_nat_.weight, rng, std::sqrt(1.0 / head_nat_.in_dim));
    head_nat_.bias.value.setZero();
}

Vec FRNetwork::embed(const Tensor& x, Ctx* ctx) const {
    if (x.ch != cfg_.in_channels || x.h != cfg_.input_size || x.w != cfg_.input_size)
        throw std::invalid_argument("FRNetwork: expected input " +
                                    std::to_string(cfg_.in_channels) + "x" +
                                    std::to_string(cfg_.input_size) + "x" +
                                    std::to_string(cfg_.input_size) + ", got " + x.shape_str());
    if (ctx) {
        ctx->conv.resize(convs_.size());
        ctx->relu.resize(convs_.size());
        ctx->pool.resize(convs_.size());
    }
    Tensor h = x;
    for (size_t i = 0; i < convs_.size(); ++i) {
        h = convs_[i].forward(h, ctx ? &ctx->conv[i] : nullptr);
        h = nn::relu(h, ctx ? &ctx->relu[i] : nullptr);
        h = nn::maxpool2(h, ctx ? &ctx->pool[i] : nullptr);
    }
    return fc_.forward(nn::flatten(h), ctx ? &ctx->fc : nullptr);
}

std::pair<Vec, Vec> FRNetwork::forward(const Tensor& x, Head head, Ctx* ctx) const {
    Vec emb = embed(x, ctx);
    const nn::Linear& h = head == Head::synthetic ? head_syn_ : head_nat_;
    if (ctx) ctx->head_used = head;
    Vec logits = h.forward(emb, ctx ? &ctx->head : nullptr);
    return {std::move(emb), std::move(logits)};
}

Tensor FRNetwork::backward(const Ctx& ctx, const Vec& dlogits, const Vec* dembedding,
                           bool need_dx) {
    nn::Linear& h = ctx.head_used == Head::synthetic ? head_syn_ : head_nat_;
    Vec demb = h.backward(ctx.head, dlogits, true);
    if (dembedding) demb += *dembedding;
    return backward_embedding(ctx, demb, need_dx);
}

Tensor FRNetwork::backward_embedding(const Ctx& ctx, const Vec& dembedding, bool need_dx) {
    Vec dflat = fc_.backward(ctx.fc, dembedding, true);
    int s = pooled_size(cfg_);
    Tensor d = nn::unflatten(dflat, feat_ch_, s, s);
    for (size_t i = convs_.size(); i-- > 0;) {
        d = nn::maxpool2_backward(ctx.pool[i], d);
        d = nn::relu_backward(ctx.relu[i], d);
        d = convs_[i].backward(ctx.conv[i], d, need_dx || i > 0);
    }
    return d;
}

void FRNetwork::collect_trunk(std::vector<nn::Param*>& out) {
    for (auto& c : convs_) c.collect(out);
    fc_.collect(out);
}

void FRNetwork::collect_head(Head head, std::vector<nn::Param*>& out) {
    (head == Head::synthetic ? head_syn_ : head_nat_).collect(out);
}

Vec softmax(const Vec& logits) {
    if (logits.size() == 0) throw std::invalid_argument("softmax: empty logits");
    double m = logits.maxCoeff();
    Vec e = (logits.array() - m).exp();
    return e / e.sum();
}

double ce_loss(const Vec& logits, int y) {
    if (y < 0 || y >= logits.size())
        throw std::invalid_argument("ce_loss: label " + std::to_string(y) +
                                    " out of range for " + std::to_string(logits.size()) +
                                    " classes");
    double m = logits.maxCoeff();
    double lse = std::log((logits.array() - m).exp().sum()) + m;
    return lse - logits[y];
}

Vec ce_loss_backward(const Vec& logits, int y, double scale) {
    if (y < 0 || y >= logits.size())
        throw std::invalid_argument("ce_loss_backward: label out of range");
    Vec g = softmax(logits) * scale;
    g[y] -= scale;
    return g;
}

double center_loss(const std::vector<Vec>& embeddings, const std::vector<int>& labels,
                   const nn::Mat& centers) {
    if (embeddings.size() != labels.size())
        throw std::invalid_argument("center_loss: embeddings/labels size mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < embeddings.size(); ++i) {
        int y = labels[i];
        if (y < 0 || y >= centers.rows())
            throw std::invalid_argument("center_loss: no centre for class " + std::to_string(y));
        if (embeddings[i].size() != centers.cols())
            throw std::invalid_argument("center_loss: embedding dim mismatch");
        acc += 0.5 * (embeddings[i].transpose() - centers.row(y)).squaredNorm();
    }
    return acc;
}

void CenterBank::update(const std::vector<Vec>& embeddings, const std::vector<int>& labels,
                        double alpha) {
    if (embeddings.size() != labels.size())
        throw std::invalid_argument("CenterBank: embeddings/labels size mismatch");
    for (long j = 0; j < centers.rows(); ++j) {
        nn::Vec delta = nn::Vec::Zero(centers.cols());
        int n = 0;
        for (size_t i = 0; i < embeddings.size(); ++i) {
            if (labels[i] != j) continue;
            delta += centers.row(j).transpose() - embeddings[i];
            ++n;
        }
        if (n > 0) centers.row(j) -= alpha * delta.transpose() / (1.0 + n);
    }
}

}  // namespace csri::fr
