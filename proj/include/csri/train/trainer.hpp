#pragma once

#include <filesystem>

#include "csri/data/types.hpp"
#include "csri/train/losses.hpp"
#include "csri/train/model.hpp"

namespace csri::train {

enum class Variant { fr_only, independent_sr_fr, joint_sr_fr, csri };

const char* to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct TrainConfig {
    nn::SgdConfig sgd{0.1, 0.9, 5e-4};
    double grad_clip_norm = 5.0;  // global L2 clip, 0 disables
    int lr_decay_steps = 0;       // 0 disables the step decay
    double lr_decay_factor = 0.5;
    int batch_aux = 8;
    int batch_nat = 8;
    int stage1_steps = 400;
    int stage2_steps = 300;
    uint64_t seed = 1;
    LossWeights weights{};
    bool center_loss_enabled = false;
    double center_lambda = 0.003;
    double center_alpha = 0.5;
};

void validate(const TrainConfig& cfg);

struct StepLog {
    long step = 0;  // 1-based, continues across stages
    LossBreakdown losses;
    double learning_rate = 0.0;
};

// Epoch-shuffled deterministic index stream.
class BatchSampler {
public:
    BatchSampler(size_t n, uint64_t seed);
    size_t next();
    std::vector<size_t> next_batch(int count);

private:
    size_t n_, pos_;
    Rng rng_;
    std::vector<size_t> order_;
};

struct BatchOptions {
    bool complement = true;         // native CE gradients reach the SR parameters
    bool train_sr_from_aux = true;  // auxiliary terms update SR (false = frozen SR)
    fr::CenterBank* syn_centers = nullptr;
    fr::CenterBank* nat_centers = nullptr;
    double center_lambda = 0.0;
    double center_alpha = 0.5;
};

// Forward + backward over one mixed batch, accumulating parameter gradients:
// auxiliary samples contribute CE through the synthetic head plus the
// lambda-weighted pixel loss; native samples contribute CE through the native
// head, routed through the shared SR and trunk. Either sample list may be
// empty. Returns the batch-mean loss components.
LossBreakdown csri_batch_gradients(CsriModel& model,
                                   const std::vector<const data::LRHRPair*>& aux,
                                   const std::vector<const Tensor*>& nat_images,
                                   const std::vector<int>& nat_labels, const LossWeights& weights,
                                   const BatchOptions& opts = {});

// Forward-only evaluation of the same batch loss components.
LossBreakdown csri_batch_losses(const CsriModel& model,
                                const std::vector<const data::LRHRPair*>& aux,
                                const std::vector<const Tensor*>& nat_images,
                                const std::vector<int>& nat_labels, const LossWeights& weights);

// SGD trainer owning the step counter and the learning-rate schedule.
// All methods abort with a diagnostic (step + component losses) if a loss
// turns non-finite.
class Trainer {
public:
    Trainer(CsriModel& model, const TrainConfig& cfg);

    // Stage 1: minimize the joint objective on auxiliary pairs
    // (SR + trunk + synthetic head update; the native head is untouched).
    std::vector<StepLog> train_stage1(const std::vector<data::LRHRPair>& aux);

    // Stage 2: mixed batches of auxiliary pairs and labelled native images,
    // minimizing the full objective. complement=false blocks the native
    // gradient at the trunk input so the SR component keeps learning from
    // auxiliary terms only.
    std::vector<StepLog> train_stage2(const std::vector<data::LRHRPair>& aux,
                                      const std::vector<Tensor>& nat_images,
                                      const std::vector<int>& nat_labels, bool complement = true);

    // Baseline phases.
    std::vector<StepLog> train_sr_only(const std::vector<data::LRHRPair>& aux, int steps);
    std::vector<StepLog> train_fr_on_frozen_sr(const std::vector<data::LRHRPair>& aux, int steps);
    std::vector<StepLog> train_fr_direct(const std::vector<data::LRHRPair>& aux, int steps);

    long step() const { return step_; }
    void set_step(long s) { step_ = s; }

private:
    double lr_at(long step0) const;
    StepLog finish_step(const LossBreakdown& b, const std::vector<nn::Param*>& params);

    CsriModel& model_;
    TrainConfig cfg_;
    long step_ = 0;
    fr::CenterBank syn_centers_, nat_centers_;
};

// "step,l_sr,l_fr_syn,l_fr_nat,l_sr_fr,l_csrl,learning_rate" rows; a leading
// '#'-comment line carries the config hash when provided.
void write_loss_csv(const std::filesystem::path& file, const std::vector<StepLog>& log,
                    const std::string& config_hash = {});

}  // namespace csri::train
