#include "csri/train/trainer.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

namespace csri::train {

namespace {
// Sampler stream salts, fixed so stage transitions and reference loops can
// reproduce the exact batch sequence for a given config seed.
constexpr uint64_t kAuxSalt = 0xA11C;
constexpr uint64_t kNatSalt = 0xBEE5;
}  // namespace

const char* to_string(Variant v) {
    switch (v) {
        case Variant::fr_only: return "fr_only";
        case Variant::independent_sr_fr: return "independent_sr_fr";
        case Variant::joint_sr_fr: return "joint_sr_fr";
        case Variant::csri: return "csri";
    }
    return "?";
}

Variant variant_from_string(const std::string& s) {
    if (s == "fr_only") return Variant::fr_only;
    if (s == "independent_sr_fr") return Variant::independent_sr_fr;
    if (s == "joint_sr_fr") return Variant::joint_sr_fr;
    if (s == "csri") return Variant::csri;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

void validate(const TrainConfig& cfg) {
    validate(cfg.weights);
    if (cfg.batch_aux < 1 || cfg.batch_nat < 1)
        throw std::invalid_argument("TrainConfig: batch sizes must be positive");
    if (cfg.stage1_steps < 1 || cfg.stage2_steps < 1)
        throw std::invalid_argument("TrainConfig: step counts must be positive");
    if (cfg.sgd.learning_rate <= 0.0)
        throw std::invalid_argument("TrainConfig: learning rate must be positive");
    if (cfg.lr_decay_steps < 0 || cfg.lr_decay_factor <= 0.0)
        throw std::invalid_argument("TrainConfig: bad learning-rate decay");
    if (cfg.grad_clip_norm < 0.0)
        throw std::invalid_argument("TrainConfig: gradient clip norm must be >= 0");
}

BatchSampler::BatchSampler(size_t n, uint64_t seed) : n_(n), pos_(0), rng_(seed) {
    if (n_ == 0) throw std::invalid_argument("BatchSampler: empty dataset");
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), size_t{0});
    rng_.shuffle(order_);
}

size_t BatchSampler::next() {
    if (pos_ == order_.size()) {
        rng_.shuffle(order_);
        pos_ = 0;
    }
    return order_[pos_++];
}

std::vector<size_t> BatchSampler::next_batch(int count) {
    std::vector<size_t> out(count);
    for (int i = 0; i < count; ++i) out[i] = next();
    return out;
}

LossBreakdown csri_batch_gradients(CsriModel& model,
                                   const std::vector<const data::LRHRPair*>& aux,
                                   const std::vector<const Tensor*>& nat_images,
                                   const std::vector<int>& nat_labels, const LossWeights& weights,
                                   const BatchOptions& opts) {
    if (nat_images.size() != nat_labels.size())
        throw std::invalid_argument("csri_batch_gradients: native images/labels size mismatch");
    validate(weights);

    double l_sr = 0.0, l_fr_syn = 0.0, l_fr_nat = 0.0;
    const bool has_sr = model.has_sr();
    const bool center = opts.center_lambda > 0.0 && opts.syn_centers;
    std::vector<nn::Vec> syn_embs, nat_embs;
    std::vector<int> syn_labels_seen;

    const double aux_scale = aux.empty() ? 0.0 : 1.0 / static_cast<double>(aux.size());
    for (const data::LRHRPair* p : aux) {
        auto f = model.forward_branch(p->input_lr, fr::Head::synthetic);
        l_fr_syn += fr::ce_loss(f.logits, p->identity) * aux_scale;

        nn::Vec dlogits = fr::ce_loss_backward(f.logits, p->identity, aux_scale);
        nn::Vec demb;
        const nn::Vec* demb_ptr = nullptr;
        if (center) {
            demb = opts.center_lambda * aux_scale *
                   (f.embedding - opts.syn_centers->centers.row(p->identity).transpose());
            demb_ptr = &demb;
            syn_embs.push_back(f.embedding);
            syn_labels_seen.push_back(p->identity);
        }
        Tensor d_sr_out = model.fr().backward(f.fr_ctx, dlogits, demb_ptr,
                                              has_sr && opts.train_sr_from_aux);
        if (has_sr) {
            l_sr += sr::sr_loss(f.sr_out, p->target_hr) * aux_scale;
            if (opts.train_sr_from_aux) {
                d_sr_out.add_inplace(
                    sr::sr_loss_backward(f.sr_out, p->target_hr, weights.lambda_sr * aux_scale));
                model.sr().backward(f.sr_ctx, d_sr_out, false);
            }
        }
    }

    const double nat_scale = nat_images.empty() ? 0.0 : 1.0 / static_cast<double>(nat_images.size());
    const bool nat_center = opts.center_lambda > 0.0 && opts.nat_centers;
    for (size_t i = 0; i < nat_images.size(); ++i) {
        int y = nat_labels[i];
        if (y < 0 || y >= model.fr().config().nat_classes)
            throw std::invalid_argument("native label " + std::to_string(y) +
                                        " out of range for " +
                                        std::to_string(model.fr().config().nat_classes) +
                                        " native classes");
        auto f = model.forward_branch(*nat_images[i], fr::Head::native);
        l_fr_nat += fr::ce_loss(f.logits, y) * nat_scale;

        nn::Vec dlogits = fr::ce_loss_backward(f.logits, y, nat_scale);
        nn::Vec demb;
        const nn::Vec* demb_ptr = nullptr;
        if (nat_center) {
            demb = opts.center_lambda * nat_scale *
                   (f.embedding - opts.nat_centers->centers.row(y).transpose());
            demb_ptr = &demb;
            nat_embs.push_back(f.embedding);
        }
        Tensor d_sr_out =
            model.fr().backward(f.fr_ctx, dlogits, demb_ptr, has_sr && opts.complement);
        if (has_sr && opts.complement) model.sr().backward(f.sr_ctx, d_sr_out, false);
    }

    if (center && !syn_embs.empty())
        opts.syn_centers->update(syn_embs, syn_labels_seen, opts.center_alpha);
    if (nat_center && !nat_embs.empty()) {
        std::vector<int> labels(nat_labels.begin(), nat_labels.end());
        opts.nat_centers->update(nat_embs, labels, opts.center_alpha);
    }

    return make_breakdown(l_sr, l_fr_syn, l_fr_nat, weights);
}

LossBreakdown csri_batch_losses(const CsriModel& model,
                                const std::vector<const data::LRHRPair*>& aux,
                                const std::vector<const Tensor*>& nat_images,
                                const std::vector<int>& nat_labels, const LossWeights& weights) {
    double l_sr = 0.0, l_fr_syn = 0.0, l_fr_nat = 0.0;
    const double aux_scale = aux.empty() ? 0.0 : 1.0 / static_cast<double>(aux.size());
    for (const data::LRHRPair* p : aux) {
        auto f = model.forward_branch(p->input_lr, fr::Head::synthetic);
        l_fr_syn += fr::ce_loss(f.logits, p->identity) * aux_scale;
        if (model.has_sr()) l_sr += sr::sr_loss(f.sr_out, p->target_hr) * aux_scale;
    }
    const double nat_scale = nat_images.empty() ? 0.0 : 1.0 / static_cast<double>(nat_images.size());
    for (size_t i = 0; i < nat_images.size(); ++i) {
        auto f = model.forward_branch(*nat_images[i], fr::Head::native);
        l_fr_nat += fr::ce_loss(f.logits, nat_labels[i]) * nat_scale;
    }
    return make_breakdown(l_sr, l_fr_syn, l_fr_nat, weights);
}

Trainer::Trainer(CsriModel& model, const TrainConfig& cfg) : model_(model), cfg_(cfg) {
    validate(cfg_);
    if (cfg_.center_loss_enabled) {
        const auto& f = model_.fr().config();
        syn_centers_ = fr::CenterBank(f.syn_classes, f.embedding_dim);
        nat_centers_ = fr::CenterBank(f.nat_classes, f.embedding_dim);
    }
}

double Trainer::lr_at(long step0) const {
    double lr = cfg_.sgd.learning_rate;
    if (cfg_.lr_decay_steps > 0)
        lr *= std::pow(cfg_.lr_decay_factor, static_cast<double>(step0 / cfg_.lr_decay_steps));
    return lr;
}

StepLog Trainer::finish_step(const LossBreakdown& b, const std::vector<nn::Param*>& params) {
    if (!finite(b))
        throw std::runtime_error(
            "non-finite loss at step " + std::to_string(step_ + 1) + " (l_sr=" +
            std::to_string(b.l_sr) + ", l_fr_syn=" + std::to_string(b.l_fr_syn) +
            ", l_fr_nat=" + std::to_string(b.l_fr_nat) + ")");
    double lr = lr_at(step_);
    nn::sgd_step(params, cfg_.sgd, lr, cfg_.grad_clip_norm);
    ++step_;
    return StepLog{step_, b, lr};
}

std::vector<StepLog> Trainer::train_stage1(const std::vector<data::LRHRPair>& aux) {
    if (aux.empty()) throw std::invalid_argument("train_stage1: no auxiliary pairs");
    BatchSampler sampler(aux.size(), mix_seed(cfg_.seed, kAuxSalt));
    auto params = model_.params_stage1();
    auto all = model_.params_all();

    BatchOptions opts;
    if (cfg_.center_loss_enabled) {
        opts.syn_centers = &syn_centers_;
        opts.center_lambda = cfg_.center_lambda;
        opts.center_alpha = cfg_.center_alpha;
    }

    std::vector<StepLog> log;
    log.reserve(cfg_.stage1_steps);
    for (int s = 0; s < cfg_.stage1_steps; ++s) {
        nn::zero_grads(all);
        std::vector<const data::LRHRPair*> batch;
        for (size_t idx : sampler.next_batch(cfg_.batch_aux)) batch.push_back(&aux[idx]);
        LossBreakdown b = csri_batch_gradients(model_, batch, {}, {}, cfg_.weights, opts);
        log.push_back(finish_step(b, params));
    }
    return log;
}

std::vector<StepLog> Trainer::train_stage2(const std::vector<data::LRHRPair>& aux,
                                           const std::vector<Tensor>& nat_images,
                                           const std::vector<int>& nat_labels, bool complement) {
    if (aux.empty()) throw std::invalid_argument("train_stage2: no auxiliary pairs");
    if (nat_images.size() != nat_labels.size())
        throw std::invalid_argument("train_stage2: native images/labels size mismatch");
    for (int y : nat_labels)
        if (y < 0 || y >= model_.fr().config().nat_classes)
            throw std::invalid_argument("train_stage2: native label " + std::to_string(y) +
                                        " out of head range");

    BatchSampler aux_sampler(aux.size(), mix_seed(cfg_.seed, kAuxSalt));
    std::optional<BatchSampler> nat_sampler;
    int b_nat = 0;
    if (!nat_images.empty()) {
        nat_sampler.emplace(nat_images.size(), mix_seed(cfg_.seed, kNatSalt));
        b_nat = cfg_.batch_nat;
    }
    auto params = model_.params_all();

    BatchOptions opts;
    opts.complement = complement;
    if (cfg_.center_loss_enabled) {
        opts.syn_centers = &syn_centers_;
        opts.nat_centers = &nat_centers_;
        opts.center_lambda = cfg_.center_lambda;
        opts.center_alpha = cfg_.center_alpha;
    }

    std::vector<StepLog> log;
    log.reserve(cfg_.stage2_steps);
    for (int s = 0; s < cfg_.stage2_steps; ++s) {
        nn::zero_grads(params);
        std::vector<const data::LRHRPair*> batch;
        for (size_t idx : aux_sampler.next_batch(cfg_.batch_aux)) batch.push_back(&aux[idx]);
        std::vector<const Tensor*> nimgs;
        std::vector<int> nlabels;
        for (int i = 0; i < b_nat; ++i) {
            size_t idx = nat_sampler->next();
            nimgs.push_back(&nat_images[idx]);
            nlabels.push_back(nat_labels[idx]);
        }
        LossBreakdown b = csri_batch_gradients(model_, batch, nimgs, nlabels, cfg_.weights, opts);
        log.push_back(finish_step(b, params));
    }
    return log;
}

std::vector<StepLog> Trainer::train_sr_only(const std::vector<data::LRHRPair>& aux, int steps) {
    if (!model_.has_sr()) throw std::invalid_argument("train_sr_only: model has no SR component");
    if (aux.empty()) throw std::invalid_argument("train_sr_only: no auxiliary pairs");
    BatchSampler sampler(aux.size(), mix_seed(cfg_.seed, kAuxSalt));
    auto params = model_.params_sr();

    std::vector<StepLog> log;
    log.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        nn::zero_grads(params);
        double l_sr = 0.0;
        double scale = 1.0 / cfg_.batch_aux;
        for (size_t idx : sampler.next_batch(cfg_.batch_aux)) {
            const auto& p = aux[idx];
            sr::SRNetwork::Ctx ctx;
            Tensor out = model_.sr().forward(p.input_lr, &ctx);
            l_sr += sr::sr_loss(out, p.target_hr) * scale;
            Tensor dy = sr::sr_loss_backward(out, p.target_hr, cfg_.weights.lambda_sr * scale);
            model_.sr().backward(ctx, dy, false);
        }
        LossBreakdown b = make_breakdown(l_sr, 0.0, 0.0, cfg_.weights);
        log.push_back(finish_step(b, params));
    }
    return log;
}

std::vector<StepLog> Trainer::train_fr_on_frozen_sr(const std::vector<data::LRHRPair>& aux,
                                                    int steps) {
    if (!model_.has_sr())
        throw std::invalid_argument("train_fr_on_frozen_sr: model has no SR component");
    if (aux.empty()) throw std::invalid_argument("train_fr_on_frozen_sr: no auxiliary pairs");
    BatchSampler sampler(aux.size(), mix_seed(cfg_.seed, kAuxSalt));
    std::vector<nn::Param*> params;
    model_.fr().collect_trunk(params);
    model_.fr().collect_head(fr::Head::synthetic, params);

    BatchOptions opts;
    opts.train_sr_from_aux = false;  // SR parameters stay untouched
    if (cfg_.center_loss_enabled) {
        opts.syn_centers = &syn_centers_;
        opts.center_lambda = cfg_.center_lambda;
        opts.center_alpha = cfg_.center_alpha;
    }

    std::vector<StepLog> log;
    log.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        nn::zero_grads(model_.params_all());
        std::vector<const data::LRHRPair*> batch;
        for (size_t idx : sampler.next_batch(cfg_.batch_aux)) batch.push_back(&aux[idx]);
        LossBreakdown b = csri_batch_gradients(model_, batch, {}, {}, cfg_.weights, opts);
        log.push_back(finish_step(b, params));
    }
    return log;
}

std::vector<StepLog> Trainer::train_fr_direct(const std::vector<data::LRHRPair>& aux, int steps) {
    if (model_.has_sr())
        throw std::invalid_argument("train_fr_direct: expected a model without SR");
    if (aux.empty()) throw std::invalid_argument("train_fr_direct: no auxiliary pairs");
    BatchSampler sampler(aux.size(), mix_seed(cfg_.seed, kAuxSalt));
    std::vector<nn::Param*> params;
    model_.fr().collect_trunk(params);
    model_.fr().collect_head(fr::Head::synthetic, params);

    BatchOptions opts;
    if (cfg_.center_loss_enabled) {
        opts.syn_centers = &syn_centers_;
        opts.center_lambda = cfg_.center_lambda;
        opts.center_alpha = cfg_.center_alpha;
    }

    std::vector<StepLog> log;
    log.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        nn::zero_grads(model_.params_all());
        std::vector<const data::LRHRPair*> batch;
        for (size_t idx : sampler.next_batch(cfg_.batch_aux)) batch.push_back(&aux[idx]);
        LossBreakdown b = csri_batch_gradients(model_, batch, {}, {}, cfg_.weights, opts);
        log.push_back(finish_step(b, params));
    }
    return log;
}

void write_loss_csv(const std::filesystem::path& file, const std::vector<StepLog>& log,
                    const std::string& config_hash) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write loss log: " + file.string());
    out.precision(17);
    if (!config_hash.empty()) out << "# config_hash " << config_hash << "\n";
    out << "step,l_sr,l_fr_syn,l_fr_nat,l_sr_fr,l_csrl,learning_rate\n";
    for (const StepLog& s : log) {
        out << s.step << "," << s.losses.l_sr << "," << s.losses.l_fr_syn << ","
            << s.losses.l_fr_nat << "," << s.losses.l_sr_fr << "," << s.losses.l_csrl << ","
            << s.learning_rate << "\n";
    }
    if (!out) throw std::runtime_error("short write: " + file.string());
}

}  // namespace csri::train
