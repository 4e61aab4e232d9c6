#include "csri/train/model.hpp"

#include "csri/resize.hpp"

namespace csri::train {

CsriModel::CsriModel(std::optional<sr::SRNetworkConfig> sr_cfg, fr::FRNetworkConfig fr_cfg)
    : sr_(sr_cfg ? std::optional<sr::SRNetwork>(sr::SRNetwork(*sr_cfg)) : std::nullopt),
      fr_(fr_cfg) {
    if (sr_cfg && sr_cfg->in_channels != fr_cfg.in_channels)
        throw std::invalid_argument("CsriModel: SR and FR channel counts differ");
}

void CsriModel::init_params(Rng& rng) {
    if (sr_) sr_->init_params(rng);
    fr_.init_params(rng);
}

CsriModel::BranchForward CsriModel::forward_branch(const Tensor& input, fr::Head head) const {
    BranchForward f;
    if (sr_) {
        f.sr_out = sr_->forward(input, &f.sr_ctx);
    } else {
        f.sr_out = input;
    }
    auto [emb, logits] = fr_.forward(f.sr_out, head, &f.fr_ctx);
    f.embedding = std::move(emb);
    f.logits = std::move(logits);
    return f;
}

Vec CsriModel::embed(const Tensor& input) const {
    if (sr_) {
        Tensor out = sr_->forward(input, nullptr);
        return fr_.embed(out, nullptr);
    }
    return fr_.embed(input, nullptr);
}

std::vector<nn::Param*> CsriModel::params_all() {
    std::vector<nn::Param*> out;
    if (sr_) sr_->collect(out);
    fr_.collect_trunk(out);
    fr_.collect_head(fr::Head::synthetic, out);
    fr_.collect_head(fr::Head::native, out);
    return out;
}

std::vector<nn::Param*> CsriModel::params_sr() {
    std::vector<nn::Param*> out;
    if (sr_) sr_->collect(out);
    return out;
}

std::vector<nn::Param*> CsriModel::params_fr_trunk() {
    std::vector<nn::Param*> out;
    fr_.collect_trunk(out);
    return out;
}

std::vector<nn::Param*> CsriModel::params_stage1() {
    std::vector<nn::Param*> out;
    if (sr_) sr_->collect(out);
    fr_.collect_trunk(out);
    fr_.collect_head(fr::Head::synthetic, out);
    return out;
}

std::vector<nn::Param*> CsriModel::params_fr_and_heads() {
    std::vector<nn::Param*> out;
    fr_.collect_trunk(out);
    fr_.collect_head(fr::Head::synthetic, out);
    fr_.collect_head(fr::Head::native, out);
    return out;
}

std::vector<Vec> extract_features(const std::vector<Tensor>& images, const CsriModel& model) {
    int s = model.fr().config().input_size;
    std::vector<Vec> out;
    out.reserve(images.size());
    for (const Tensor& img : images) {
        if (img.empty()) throw std::invalid_argument("extract_features: empty image");
        Tensor up = resize_bicubic(img, s, s);
        up.clamp01();
        out.push_back(model.embed(up));
    }
    return out;
}

}  // namespace csri::train
