#pragma once

#include <utility>

#include "csri/nn/layers.hpp"

namespace csri::fr {

using nn::Vec;

enum class Head { synthetic, native };

struct FRNetworkConfig {
    std::vector<int> trunk_channels{32, 64, 128};  // one conv+pool block per entry
    int kernel = 3;
    int input_size = 64;  // square input, divisible by 2^blocks
    int in_channels = 1;
    int embedding_dim = 64;
    int syn_classes = 0;  // synthetic (auxiliary) label space
    int nat_classes = 0;  // native label space
};

// Identity network: a shared convolutional trunk producing an embedding,
// plus one classifier head per label space. Both heads read the same trunk
// parameter storage.
class FRNetwork {
public:
    explicit FRNetwork(const FRNetworkConfig& cfg);

    void init_params(Rng& rng);

    struct Ctx {
        std::vector<nn::ConvCtx> conv;
        std::vector<nn::ReluCtx> relu;
        std::vector<nn::PoolCtx> pool;
        nn::LinearCtx fc;
        nn::LinearCtx head;
        Head head_used = Head::synthetic;
    };

    // Embedding from the shared trunk only (deployment path).
    Vec embed(const Tensor& x, Ctx* ctx) const;

    // (embedding, logits) through the selected head.
    std::pair<Vec, Vec> forward(const Tensor& x, Head head, Ctx* ctx) const;

    // Backprop dL/dlogits (and optionally an extra dL/dembedding term) to the
    // input; accumulates parameter gradients for trunk + the used head.
    Tensor backward(const Ctx& ctx, const Vec& dlogits, const Vec* dembedding, bool need_dx);

    // Trunk-only backprop for a dL/dembedding gradient (no head involved).
    Tensor backward_embedding(const Ctx& ctx, const Vec& dembedding, bool need_dx);

    void collect_trunk(std::vector<nn::Param*>& out);
    void collect_head(Head head, std::vector<nn::Param*>& out);

    const FRNetworkConfig& config() const { return cfg_; }
    int classes(Head head) const {
        return head == Head::synthetic ? cfg_.syn_classes : cfg_.nat_classes;
    }

private:
    FRNetworkConfig cfg_;
    std::vector<nn::Conv2d> convs_;
    int feat_ch_ = 0, feat_hw_ = 0;
    nn::Linear fc_;
    nn::Linear head_syn_;
    nn::Linear head_nat_;
};

// Numerically stable softmax; output sums to 1 for any finite logits.
Vec softmax(const Vec& logits);

// -log softmax(logits)[y] via the log-sum-exp form. Label must be in range.
double ce_loss(const Vec& logits, int y);

// d(scale * ce_loss)/dlogits = scale * (softmax(logits) - onehot(y))
Vec ce_loss_backward(const Vec& logits, int y, double scale);

// Half the summed squared distance between each embedding and its class
// centre: 0.5 * sum_i ||e_i - c_{y_i}||^2. One centre per class required.
double center_loss(const std::vector<Vec>& embeddings, const std::vector<int>& labels,
                   const nn::Mat& centers);

// Class centres maintained by the running-mean rule:
//   c_j <- c_j - alpha * sum_{i: y_i=j}(c_j - e_i) / (1 + n_j)
struct CenterBank {
    nn::Mat centers;  // (classes, dim), zero-initialized

    CenterBank() = default;
    CenterBank(int classes, int dim) : centers(nn::Mat::Zero(classes, dim)) {}

    void update(const std::vector<Vec>& embeddings, const std::vector<int>& labels, double alpha);
};

}  // namespace csri::fr
