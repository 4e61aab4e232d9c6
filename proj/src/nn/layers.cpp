#include "csri/nn/layers.hpp"

#include <stdexcept>

namespace csri::nn {

void init_normal(Param& p, Rng& rng, double std) {
    for (long i = 0; i < p.value.size(); ++i) p.value[i] = rng.normal(0.0, std);
    p.mom.setZero();
}

void sgd_step(const std::vector<Param*>& params, const SgdConfig& cfg, double lr,
              double clip_norm) {
    if (clip_norm > 0.0) {
        double g2 = 0.0;
        for (const Param* p : params) g2 += p->grad.squaredNorm();
        if (g2 > clip_norm * clip_norm) {
            double scale = clip_norm / std::sqrt(g2);
            for (Param* p : params) p->grad *= scale;
        }
    }
    for (Param* p : params) {
        double wd = p->decay ? cfg.weight_decay : 0.0;
        p->mom = cfg.momentum * p->mom - lr * (p->grad + wd * p->value);
        p->value += p->mom;
    }
}

void zero_grads(const std::vector<Param*>& params) {
    for (Param* p : params) p->grad.setZero();
}

// ---------------------------------------------------------------------------
// Conv2d: im2col + GEMM. The column matrix is rebuilt in backward from the
// cached input instead of being cached itself, keeping contexts small.
// ---------------------------------------------------------------------------

Conv2d::Conv2d(std::string name, int in_ch_, int out_ch_, int k_)
    : in_ch(in_ch_), out_ch(out_ch_), k(k_), pad(k_ / 2) {
    if (in_ch < 1 || out_ch < 1 || k < 1 || k % 2 == 0)
        throw std::invalid_argument("Conv2d " + name + ": bad config");
    weight.name = name + ".w";
    weight.resize({out_ch, in_ch * k * k});
    bias.name = name + ".b";
    bias.resize({out_ch});
    bias.decay = false;
}

namespace {

void im2col(const Tensor& x, int k, int pad, Mat& col) {
    const int hw = x.h * x.w;
    col.resize(static_cast<long>(x.ch) * k * k, hw);
    for (int c = 0; c < x.ch; ++c) {
        const double* plane = x.plane(c);
        for (int ky = 0; ky < k; ++ky)
            for (int kx = 0; kx < k; ++kx) {
                long row = (static_cast<long>(c) * k + ky) * k + kx;
                for (int y = 0; y < x.h; ++y) {
                    int sy = y + ky - pad;
                    double* dst = col.data() + row + static_cast<long>(y) * x.w * col.rows();
                    if (sy < 0 || sy >= x.h) {
                        for (int xx = 0; xx < x.w; ++xx) dst[static_cast<long>(xx) * col.rows()] = 0.0;
                        continue;
                    }
                    const double* src = plane + static_cast<long>(sy) * x.w;
                    for (int xx = 0; xx < x.w; ++xx) {
                        int sx = xx + kx - pad;
                        dst[static_cast<long>(xx) * col.rows()] =
                            (sx < 0 || sx >= x.w) ? 0.0 : src[sx];
                    }
                }
            }
    }
}

void col2im_add(const Mat& col, int k, int pad, Tensor& dx) {
    for (int c = 0; c < dx.ch; ++c) {
        double* plane = dx.plane(c);
        for (int ky = 0; ky < k; ++ky)
            for (int kx = 0; kx < k; ++kx) {
                long row = (static_cast<long>(c) * k + ky) * k + kx;
                for (int y = 0; y < dx.h; ++y) {
                    int sy = y + ky - pad;
                    if (sy < 0 || sy >= dx.h) continue;
                    const double* src = col.data() + row + static_cast<long>(y) * dx.w * col.rows();
                    double* dst = plane + static_cast<long>(sy) * dx.w;
                    for (int xx = 0; xx < dx.w; ++xx) {
                        int sx = xx + kx - pad;
                        if (sx >= 0 && sx < dx.w) dst[sx] += src[static_cast<long>(xx) * col.rows()];
                    }
                }
            }
    }
}

}  // namespace

Tensor Conv2d::forward(const Tensor& x, ConvCtx* ctx) const {
    if (x.ch != in_ch)
        throw std::invalid_argument(weight.name + ": expected " + std::to_string(in_ch) +
                                    " input channels, got " + x.shape_str());
    if (ctx) ctx->x = x;

    Mat col;
    im2col(x, k, pad, col);
    Tensor y(out_ch, x.h, x.w);
    const long hw = static_cast<long>(x.h) * x.w;
    Eigen::Map<MatRM> ymap(y.data(), out_ch, hw);
    Eigen::Map<const MatRM> wmap(weight.value.data(), out_ch, static_cast<long>(in_ch) * k * k);
    ymap.noalias() = wmap * col;
    ymap.colwise() += bias.value;
    return y;
}

Tensor Conv2d::backward(const ConvCtx& ctx, const Tensor& dy, bool need_dx) {
    const Tensor& x = ctx.x;
    if (dy.ch != out_ch || dy.h != x.h || dy.w != x.w)
        throw std::invalid_argument(weight.name + ": bad upstream gradient shape " + dy.shape_str());

    Mat col;
    im2col(x, k, pad, col);
    const long hw = static_cast<long>(x.h) * x.w;
    Eigen::Map<const MatRM> dymap(dy.data(), out_ch, hw);

    Eigen::Map<MatRM> dwmap(weight.grad.data(), out_ch, static_cast<long>(in_ch) * k * k);
    dwmap.noalias() += dymap * col.transpose();
    // fixed-order reduction: keeps the result independent of heap alignment
    for (int o = 0; o < out_ch; ++o) {
        const double* row = dy.plane(o);
        double acc = 0.0;
        for (long i = 0; i < hw; ++i) acc += row[i];
        bias.grad[o] += acc;
    }

    Tensor dx;
    if (need_dx) {
        Eigen::Map<const MatRM> wmap(weight.value.data(), out_ch, static_cast<long>(in_ch) * k * k);
        Mat dcol = wmap.transpose() * dymap;
        dx = Tensor(in_ch, x.h, x.w);
        col2im_add(dcol, k, pad, dx);
    }
    return dx;
}

Tensor relu(const Tensor& x, ReluCtx* ctx) {
    Tensor y = x;
    for (double& v : y.v) v = v > 0.0 ? v : 0.0;
    if (ctx) ctx->y = y;
    return y;
}

Tensor relu_backward(const ReluCtx& ctx, const Tensor& dy) {
    require_same_shape(ctx.y, dy, "relu_backward");
    Tensor dx = dy;
    for (size_t i = 0; i < dx.v.size(); ++i)
        if (!(ctx.y.v[i] > 0.0)) dx.v[i] = 0.0;
    return dx;
}

Tensor maxpool2(const Tensor& x, PoolCtx* ctx) {
    if (x.h % 2 != 0 || x.w % 2 != 0)
        throw std::invalid_argument("maxpool2: input sides must be even, got " + x.shape_str());
    const int oh = x.h / 2, ow = x.w / 2;
    Tensor y(x.ch, oh, ow);
    if (ctx) {
        ctx->in_ch = x.ch;
        ctx->in_h = x.h;
        ctx->in_w = x.w;
        ctx->argmax.assign(y.size(), 0);
    }
    for (int c = 0; c < x.ch; ++c)
        for (int y0 = 0; y0 < oh; ++y0)
            for (int x0 = 0; x0 < ow; ++x0) {
                double best = -1e308;
                int best_idx = 0;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        int yy = 2 * y0 + dy, xx = 2 * x0 + dx;
                        double v = x.at(c, yy, xx);
                        if (v > best) {
                            best = v;
                            best_idx = (c * x.h + yy) * x.w + xx;
                        }
                    }
                y.at(c, y0, x0) = best;
                if (ctx) ctx->argmax[(static_cast<size_t>(c) * oh + y0) * ow + x0] = best_idx;
            }
    return y;
}

Tensor maxpool2_backward(const PoolCtx& ctx, const Tensor& dy) {
    Tensor dx(ctx.in_ch, ctx.in_h, ctx.in_w);
    for (size_t i = 0; i < dy.v.size(); ++i) dx.v[ctx.argmax[i]] += dy.v[i];
    return dx;
}

Linear::Linear(std::string name, int in_dim_, int out_dim_) : in_dim(in_dim_), out_dim(out_dim_) {
    if (in_dim < 1 || out_dim < 1) throw std::invalid_argument("Linear " + name + ": bad config");
    weight.name = name + ".w";
    weight.resize({out_dim, in_dim});
    bias.name = name + ".b";
    bias.resize({out_dim});
    bias.decay = false;
}

Vec Linear::forward(const Vec& x, LinearCtx* ctx) const {
    if (x.size() != in_dim)
        throw std::invalid_argument(weight.name + ": expected input dim " + std::to_string(in_dim) +
                                    ", got " + std::to_string(x.size()));
    if (ctx) ctx->x = x;
    Eigen::Map<const MatRM> wmap(weight.value.data(), out_dim, in_dim);
    return wmap * x + bias.value;
}

Vec Linear::backward(const LinearCtx& ctx, const Vec& dy, bool need_dx) {
    if (dy.size() != out_dim)
        throw std::invalid_argument(weight.name + ": bad upstream gradient size");
    Eigen::Map<MatRM> dwmap(weight.grad.data(), out_dim, in_dim);
    dwmap.noalias() += dy * ctx.x.transpose();
    bias.grad += dy;
    if (!need_dx) return Vec();
    Eigen::Map<const MatRM> wmap(weight.value.data(), out_dim, in_dim);
    return wmap.transpose() * dy;
}

}  // namespace csri::nn
