#pragma once

#include <optional>

#include "csri/fr/network.hpp"
#include "csri/sr/network.hpp"

namespace csri::train {

using nn::Vec;

// The two-branch network: one SR component and one FR trunk shared by the
// synthetic and native branches, which differ only in the classifier head
// applied. For the fr_only baseline the SR component is absent and images
// feed the trunk directly.
class CsriModel {
public:
    CsriModel(std::optional<sr::SRNetworkConfig> sr_cfg, fr::FRNetworkConfig fr_cfg);

    void init_params(Rng& rng);

    bool has_sr() const { return sr_.has_value(); }
    sr::SRNetwork& sr() { return *sr_; }
    const sr::SRNetwork& sr() const { return *sr_; }
    fr::FRNetwork& fr() { return fr_; }
    const fr::FRNetwork& fr() const { return fr_; }

    struct BranchForward {
        sr::SRNetwork::Ctx sr_ctx;
        fr::FRNetwork::Ctx fr_ctx;
        Tensor sr_out;  // == input when the model has no SR component
        Vec embedding;
        Vec logits;
    };

    // Input must be pre-upsampled to the FR input size and in [0,1].
    BranchForward forward_branch(const Tensor& input, fr::Head head) const;

    // Deployment path: shared SR + trunk, no head.
    Vec embed(const Tensor& input) const;

    std::vector<nn::Param*> params_all();
    std::vector<nn::Param*> params_sr();
    std::vector<nn::Param*> params_fr_trunk();
    std::vector<nn::Param*> params_stage1();    // SR + trunk + synthetic head
    std::vector<nn::Param*> params_fr_and_heads();

private:
    std::optional<sr::SRNetwork> sr_;
    fr::FRNetwork fr_;
};

// Embeds a batch of raw images: bicubic upsample to the FR input size,
// clamp to [0,1], then the shared SR + trunk path. Deterministic; duplicate
// inputs produce identical embeddings.
std::vector<Vec> extract_features(const std::vector<Tensor>& images, const CsriModel& model);

}  // namespace csri::train
