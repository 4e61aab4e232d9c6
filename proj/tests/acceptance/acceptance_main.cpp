// Acceptance suite: runs the experiment-level checks end to end and prints
// one PASS/FAIL line per criterion. Exit code = number of failed criteria.
//
//   csri_acceptance                 run everything
//   csri_acceptance --criterion N   run a single criterion

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "csri/cli/commands.hpp"
#include "csri/data/manifest.hpp"
#include "csri/data/degrade.hpp"
#include "csri/data/split.hpp"
#include "csri/eval/metrics.hpp"
#include "csri/resize.hpp"
#include "csri/synth/faces.hpp"
#include "csri/train/checkpoint.hpp"
#include "csri/train/trainer.hpp"

using namespace csri;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

bool close_rel(double a, double b, double rel, double abs_floor) {
    double diff = std::fabs(a - b);
    if (diff <= abs_floor) return true;
    return diff <= rel * std::max(std::fabs(a), std::fabs(b));
}

fs::path scratch_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("csri_acceptance_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// ---------------------------------------------------------------------------
// 1. Loss arithmetic
// ---------------------------------------------------------------------------
Outcome criterion1() {
    train::LossWeights w;  // default lambda_sr = 0.003
    if (w.lambda_sr != 0.003) return {false, "default lambda_sr is not 0.003"};

    if (train::joint_loss(2.0, 10.0, w) != 2.03)
        return {false, "joint_loss(2.0, 10.0, 0.003) != 2.03"};
    if (train::csri_loss(2.0, 1.5, 10.0, w) != 3.53)
        return {false, "csri_loss(2.0, 1.5, 10.0, 0.003) != 3.53"};

    Rng rng(1001);
    for (int i = 0; i < 10000; ++i) {
        train::LossWeights lw{rng.uniform(0.0, 2.0)};
        double l_sr = rng.uniform(0, 100), l_fs = rng.uniform(0, 10), l_fn = rng.uniform(0, 10);
        train::LossBreakdown b = train::make_breakdown(l_sr, l_fs, l_fn, lw);
        double e1 = std::fabs(b.l_sr_fr - (b.l_fr_syn + lw.lambda_sr * b.l_sr));
        double e2 = std::fabs(b.l_csrl - ((b.l_fr_syn + b.l_fr_nat) + lw.lambda_sr * b.l_sr));
        if (e1 > 1e-12 * std::max(1.0, std::fabs(b.l_sr_fr)) ||
            e2 > 1e-12 * std::max(1.0, std::fabs(b.l_csrl)))
            return {false, "composition identity violated at trial " + std::to_string(i)};
    }
    return {true, "identities hold to 1e-12 on 10000 random trials; 2.03 and 3.53 exact"};
}

// ---------------------------------------------------------------------------
// 2. Cross-entropy fixed points
// ---------------------------------------------------------------------------
Outcome criterion2() {
    for (int c : {2, 10, 100}) {
        fr::Vec logits = fr::Vec::Constant(c, 0.37);
        double err = std::fabs(fr::ce_loss(logits, c / 2) - std::log(double(c)));
        if (err > 1e-12)
            return {false, "uniform logits C=" + std::to_string(c) + " off by " + fmt(err, 16)};
    }
    Rng rng(1002);
    for (int it = 0; it < 200; ++it) {
        int c = 2 + rng.uniform_int(50);
        fr::Vec logits(c);
        for (int i = 0; i < c; ++i) logits[i] = rng.uniform(-5, 5);
        int y = rng.uniform_int(c);
        double base = fr::ce_loss(logits, y);
        double shift = rng.uniform(-1000, 1000);
        fr::Vec shifted = logits.array() + shift;
        if (std::fabs(fr::ce_loss(shifted, y) - base) > 1e-9)
            return {false, "shift invariance violated at trial " + std::to_string(it)};
    }
    return {true, "ln C reproduced within 1e-12 for C in {2,10,100}; shift invariance within 1e-9"};
}

// ---------------------------------------------------------------------------
// 3. Gradient correctness on the 64-bit toy instantiation
// ---------------------------------------------------------------------------
struct GradSet {
    std::vector<double> g;  // flattened over params_all order
};

Outcome criterion3() {
    // 8x8 inputs, 2-layer SR, 1-conv FR trunk, 3-class heads
    sr::SRNetworkConfig scfg;
    scfg.depth = 2;
    scfg.channels = 4;
    fr::FRNetworkConfig fcfg;
    fcfg.trunk_channels = {4};
    fcfg.input_size = 8;
    fcfg.embedding_dim = 6;
    fcfg.syn_classes = 3;
    fcfg.nat_classes = 3;
    train::CsriModel model(scfg, fcfg);
    Rng rng(1003);
    model.init_params(rng);
    // perturb all parameters away from the near-zero initialization so every
    // pathway carries signal
    for (nn::Param* p : model.params_all())
        for (long i = 0; i < p->size(); ++i) p->value[i] += 0.2 * std::sin(0.37 * (i + 3));

    data::DegradationConfig dc;
    dc.lr_height = 4;
    dc.lr_width = 4;
    dc.blur_sigma = 0;
    dc.noise_sigma = 0;
    std::vector<data::LRHRPair> aux;
    for (int i = 0; i < 2; ++i) {
        Tensor hr = synth::render_face(8, mix_seed(7, i), mix_seed(9, i));
        aux.push_back(data::make_lr_hr_pair(hr, dc, i % 3));
    }
    std::vector<Tensor> nat_store;
    for (int i = 0; i < 2; ++i) {
        Tensor hr = synth::render_face(8, mix_seed(21, i), mix_seed(23, i));
        dc.seed = i;
        dc.noise_sigma = 0.02;
        Tensor lr = data::degrade_native(hr, dc);
        dc.noise_sigma = 0;
        Tensor up = resize_bicubic(lr, 8, 8);
        up.clamp01();
        nat_store.push_back(std::move(up));
    }
    std::vector<const data::LRHRPair*> aux_batch{&aux[0], &aux[1]};
    std::vector<const Tensor*> nat_batch{&nat_store[0], &nat_store[1]};
    std::vector<int> nat_labels{0, 2};
    train::LossWeights w;  // 0.003

    auto params = model.params_all();
    long total = 0;
    for (auto* p : params) total += p->size();

    auto collect_grads = [&]() {
        GradSet gs;
        gs.g.reserve(total);
        for (auto* p : params)
            for (long i = 0; i < p->size(); ++i) gs.g.push_back(p->grad[i]);
        return gs;
    };

    // analytic gradients per component
    auto analytic = [&](double lam_sr, double lam_syn, double lam_nat) {
        nn::zero_grads(params);
        const double aux_scale = 1.0 / aux_batch.size();
        for (const auto* pr : aux_batch) {
            auto f = model.forward_branch(pr->input_lr, fr::Head::synthetic);
            if (lam_syn != 0.0) {
                nn::Vec dlogits = fr::ce_loss_backward(f.logits, pr->identity, lam_syn * aux_scale);
                Tensor dx = model.fr().backward(f.fr_ctx, dlogits, nullptr, true);
                if (lam_sr != 0.0)
                    dx.add_inplace(sr::sr_loss_backward(f.sr_out, pr->target_hr, lam_sr * aux_scale));
                model.sr().backward(f.sr_ctx, dx, false);
            } else if (lam_sr != 0.0) {
                Tensor dx = sr::sr_loss_backward(f.sr_out, pr->target_hr, lam_sr * aux_scale);
                model.sr().backward(f.sr_ctx, dx, false);
            }
        }
        const double nat_scale = 1.0 / nat_batch.size();
        if (lam_nat != 0.0) {
            for (size_t i = 0; i < nat_batch.size(); ++i) {
                auto f = model.forward_branch(*nat_batch[i], fr::Head::native);
                nn::Vec dlogits = fr::ce_loss_backward(f.logits, nat_labels[i], lam_nat * nat_scale);
                Tensor dx = model.fr().backward(f.fr_ctx, dlogits, nullptr, true);
                model.sr().backward(f.sr_ctx, dx, false);
            }
        }
        return collect_grads();
    };

    GradSet g_sr = analytic(1.0, 0.0, 0.0);
    GradSet g_syn = analytic(0.0, 1.0, 0.0);
    GradSet g_nat = analytic(0.0, 0.0, 1.0);
    GradSet g_csrl = analytic(w.lambda_sr, 1.0, 1.0);

    // the complement pathway: native CE gradient must reach SR parameters
    long sr_total = 0;
    for (auto* p : model.params_sr()) sr_total += p->size();
    double nat_on_sr = 0;
    for (long i = 0; i < sr_total; ++i) nat_on_sr = std::max(nat_on_sr, std::fabs(g_nat.g[i]));
    if (nat_on_sr == 0.0)
        return {false, "native FR loss gradient on SR parameters is identically zero"};

    // finite differences of all four components in one sweep
    const double h = 1e-5;
    long flat = 0;
    double worst = 0;
    std::string worst_name;
    for (auto* p : params) {
        for (long i = 0; i < p->size(); ++i, ++flat) {
            double old = p->value[i];
            p->value[i] = old + h;
            train::LossBreakdown bp =
                train::csri_batch_losses(model, aux_batch, nat_batch, nat_labels, w);
            p->value[i] = old - h;
            train::LossBreakdown bm =
                train::csri_batch_losses(model, aux_batch, nat_batch, nat_labels, w);
            p->value[i] = old;

            struct Pair {
                double fd, an;
                const char* what;
            } checks[] = {
                {(bp.l_sr - bm.l_sr) / (2 * h), g_sr.g[flat], "l_sr"},
                {(bp.l_fr_syn - bm.l_fr_syn) / (2 * h), g_syn.g[flat], "l_fr_syn"},
                {(bp.l_fr_nat - bm.l_fr_nat) / (2 * h), g_nat.g[flat], "l_fr_nat"},
                {(bp.l_csrl - bm.l_csrl) / (2 * h), g_csrl.g[flat], "l_csrl"},
            };
            for (const auto& c : checks) {
                if (!close_rel(c.fd, c.an, 1e-4, 1e-8)) {
                    double rel = std::fabs(c.fd - c.an) /
                                 std::max({std::fabs(c.fd), std::fabs(c.an), 1e-300});
                    return {false, std::string(c.what) + " gradient mismatch at " + p->name +
                                       "[" + std::to_string(i) + "]: fd=" + fmt(c.fd, 10) +
                                       " analytic=" + fmt(c.an, 10) + " rel=" + fmt(rel, 8)};
                }
                double rel = std::fabs(c.fd - c.an) /
                             std::max({std::fabs(c.fd), std::fabs(c.an), 1e-12});
                if (std::fabs(c.fd - c.an) > 1e-8 && rel > worst) {
                    worst = rel;
                    worst_name = std::string(c.what) + "@" + p->name;
                }
            }
        }
    }
    return {true, std::to_string(total) +
                      " parameters x 4 losses vs central differences (h=1e-5) within 1e-4; "
                      "worst rel " + fmt(worst, 8) + " (" + worst_name +
                      "); |dL_fr_nat/dSR|max = " + fmt(nat_on_sr, 8)};
}

// ---------------------------------------------------------------------------
// 4. Metric oracle equivalence
// ---------------------------------------------------------------------------
Outcome criterion4() {
    // worked values first
    {
        std::vector<int> ranking{4, 0, 3, 1, 2};
        std::vector<uint8_t> is_match{0, 0, 0, 1, 1};  // ranks 1 and 3 hold matches
        double ap = eval::average_precision(ranking, is_match);
        if (ap != (1.0 + 2.0 / 3.0) / 2.0)
            return {false, "worked AP (matches at ranks 1,3) is " + fmt(ap, 9) + ", want 5/6"};

        std::vector<std::vector<int>> rankings(3, {0, 1, 2, 3, 4});
        std::vector<std::vector<uint8_t>> truth{
            {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 0, 0, 1}};
        std::vector<double> cmc = eval::cmc_curve(rankings, truth, 5);
        if (cmc[0] != 1.0 / 3.0 || cmc[1] != 2.0 / 3.0 || cmc[4] != 1.0)
            return {false, "worked CMC {1/3, 2/3, 1} not reproduced"};
    }

    Rng rng(1004);
    for (int inst = 0; inst < 100; ++inst) {
        int dim = 2 + rng.uniform_int(6);
        int n_ids = 1 + rng.uniform_int(4);
        bool int_valued = inst % 3 == 0;  // force exact distance ties regularly
        auto rand_vec = [&]() {
            eval::Vec v(dim);
            for (int j = 0; j < dim; ++j)
                v[j] = int_valued ? double(rng.uniform_int(4)) : rng.uniform(-1, 1);
            return v;
        };

        std::vector<eval::Vec> gallery;
        std::vector<std::optional<int>> glabels;
        for (int id = 0; id < n_ids; ++id) {
            gallery.push_back(rand_vec());
            glabels.push_back(id);
        }
        int extra = rng.uniform_int(17);
        for (int e = 0; e < extra && gallery.size() < 20; ++e) {
            gallery.push_back(rand_vec());
            glabels.push_back(rng.uniform() < 0.5 ? std::optional<int>(rng.uniform_int(n_ids))
                                                  : std::nullopt);
        }
        std::vector<eval::Vec> probes;
        std::vector<int> plabels;
        int n_probes = 1 + rng.uniform_int(5);
        for (int p = 0; p < n_probes; ++p) {
            probes.push_back(rand_vec());
            plabels.push_back(rng.uniform_int(n_ids));
        }
        int K = 1 + rng.uniform_int(25);

        eval::EvalReport rep = eval::evaluate(probes, plabels, gallery, glabels, K);

        // brute-force oracle: naive distances, stable sort, definitional sums
        std::vector<double> oracle_aps;
        std::vector<long> best_rank;
        for (int p = 0; p < n_probes; ++p) {
            std::vector<std::pair<double, int>> scored;
            for (size_t g = 0; g < gallery.size(); ++g) {
                double acc = 0;
                for (int j = 0; j < dim; ++j) {
                    double d = probes[p][j] - gallery[g][j];
                    acc += d * d;
                }
                scored.emplace_back(acc, int(g));
            }
            std::stable_sort(scored.begin(), scored.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            long first = -1, nm = 0, total_m = 0;
            double ap_sum = 0;
            for (size_t r = 0; r < scored.size(); ++r) {
                bool m = glabels[scored[r].second].has_value() &&
                         *glabels[scored[r].second] == plabels[p];
                if (m) {
                    ++nm;
                    ap_sum += double(nm) / double(r + 1);
                    if (first < 0) first = long(r) + 1;
                }
            }
            for (const auto& gl : glabels)
                if (gl && *gl == plabels[p]) ++total_m;
            best_rank.push_back(first);
            oracle_aps.push_back(ap_sum / double(total_m));
        }
        int keff = std::min<int>(K, int(gallery.size()));
        for (int k = 1; k <= keff; ++k) {
            size_t hits = 0;
            for (long br : best_rank)
                if (br <= k) ++hits;
            double want = double(hits) / double(n_probes);
            if (rep.cmc[k - 1] != want)
                return {false, "CMC disagrees with the oracle at instance " +
                                   std::to_string(inst) + ", rank " + std::to_string(k)};
        }
        double map_sum = 0;
        for (int p = 0; p < n_probes; ++p) {
            if (rep.per_probe_ap[p] != oracle_aps[p])
                return {false, "AP disagrees with the oracle at instance " +
                                   std::to_string(inst) + ", probe " + std::to_string(p)};
            map_sum += oracle_aps[p];
        }
        if (rep.map != map_sum / n_probes)
            return {false, "mAP disagrees with the oracle at instance " + std::to_string(inst)};
    }
    return {true, "exact CMC/AP/mAP agreement with the brute-force oracle on 100 random "
                  "instances incl. tie cases; worked values 5/6 and {1/3,2/3,1} exact"};
}

// ---------------------------------------------------------------------------
// 5. Parameter sharing
// ---------------------------------------------------------------------------
Outcome criterion5() {
    fs::path dir = scratch_dir("c5");
    sr::SRNetworkConfig scfg;
    scfg.depth = 3;
    scfg.channels = 8;
    fr::FRNetworkConfig fcfg;
    fcfg.trunk_channels = {8, 16};
    fcfg.input_size = 16;
    fcfg.embedding_dim = 12;
    fcfg.syn_classes = 4;
    fcfg.nat_classes = 4;
    train::CsriModel model(scfg, fcfg);
    Rng rng(1005);
    model.init_params(rng);

    data::DegradationConfig dc;
    dc.lr_height = 8;
    dc.lr_width = 8;
    dc.blur_sigma = 0;
    dc.noise_sigma = 0;
    std::vector<data::LRHRPair> aux;
    std::vector<Tensor> nat;
    std::vector<int> nat_labels;
    for (int id = 0; id < 4; ++id)
        for (int i = 0; i < 4; ++i) {
            Tensor hr = synth::render_face(16, mix_seed(31, id), mix_seed(33, id * 10 + i));
            aux.push_back(data::make_lr_hr_pair(hr, dc, id));
            dc.seed = id * 10 + i;
            dc.noise_sigma = 0.03;
            Tensor lr = data::degrade_native(hr, dc);
            dc.noise_sigma = 0;
            Tensor up = resize_bicubic(lr, 16, 16);
            up.clamp01();
            nat.push_back(std::move(up));
            nat_labels.push_back(id);
        }

    train::TrainConfig tcfg;
    tcfg.sgd.learning_rate = 0.05;
    tcfg.batch_aux = 4;
    tcfg.batch_nat = 4;
    tcfg.stage1_steps = 25;
    tcfg.stage2_steps = 25;
    tcfg.weights.lambda_sr = 0.768;
    tcfg.seed = 7;
    train::Trainer trainer(model, tcfg);
    trainer.train_stage1(aux);
    trainer.train_stage2(aux, nat, nat_labels, true);

    train::CheckpointMeta meta;
    meta.variant = "csri";
    meta.step = trainer.step();
    fs::path ckpt = dir / "model.ckpt";
    train::save_checkpoint(ckpt, model, meta);

    auto names = train::checkpoint_block_names(ckpt);
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != names.size()) return {false, "duplicate parameter blocks in checkpoint"};
    size_t sr_blocks = 0, trunk_blocks = 0;
    for (const auto& n : names) {
        if (n.rfind("sr.", 0) == 0) ++sr_blocks;
        if (n.rfind("fr.trunk.", 0) == 0) ++trunk_blocks;
    }
    if (sr_blocks != 6) return {false, "expected one SR block set (6 blocks), found " +
                                           std::to_string(sr_blocks)};
    if (trunk_blocks != 8) return {false, "expected one FR trunk block set (8 blocks), found " +
                                              std::to_string(trunk_blocks)};

    train::CsriModel loaded = train::load_checkpoint(ckpt);
    Tensor probe = synth::render_face(16, 77, 78);
    auto fs_ = loaded.forward_branch(probe, fr::Head::synthetic);
    auto fn = loaded.forward_branch(probe, fr::Head::native);
    if (!(fs_.embedding.array() == fn.embedding.array()).all())
        return {false, "synthetic-path and native-path embeddings differ"};
    fs::remove_all(dir);
    return {true, "after stage-2 training: one SR block set, one trunk block set, "
                  "branch embeddings bitwise identical"};
}

// ---------------------------------------------------------------------------
// 6. SR utility after stage-1 training
// ---------------------------------------------------------------------------
Outcome criterion6() {
    const int ids = 48, per_id = 8, size = 64;
    data::DegradationConfig dc;
    dc.lr_height = 16;
    dc.lr_width = 16;
    dc.blur_sigma = 0;
    dc.noise_sigma = 0;

    std::vector<int> labels(ids);
    for (int i = 0; i < ids; ++i) labels[i] = i;
    auto [train_ids, test_ids] = data::split_identities(labels, 404);

    std::vector<data::LRHRPair> train_pairs, test_pairs;
    std::map<int, int> class_of;
    for (size_t c = 0; c < train_ids.size(); ++c) class_of[train_ids[c]] = int(c);
    for (int id : train_ids) {
        uint64_t id_seed = mix_seed(515, id);
        for (int i = 0; i < per_id; ++i) {
            Tensor hr = synth::render_face(size, id_seed, mix_seed(id_seed, i));
            train_pairs.push_back(data::make_lr_hr_pair(hr, dc, class_of[id]));
        }
    }
    for (int id : test_ids) {
        uint64_t id_seed = mix_seed(515, id);
        for (int i = 0; i < per_id; ++i) {
            Tensor hr = synth::render_face(size, id_seed, mix_seed(id_seed, i));
            test_pairs.push_back(data::make_lr_hr_pair(hr, dc, 0));
        }
    }

    sr::SRNetworkConfig scfg;  // desk-scale default network
    scfg.depth = 6;
    scfg.channels = 32;
    fr::FRNetworkConfig fcfg;
    fcfg.trunk_channels = {32, 64, 128};
    fcfg.input_size = size;
    fcfg.embedding_dim = 64;
    fcfg.syn_classes = int(train_ids.size());
    fcfg.nat_classes = int(train_ids.size());
    train::CsriModel model(scfg, fcfg);
    Rng rng(1006);
    model.init_params(rng);

    train::TrainConfig tcfg;
    tcfg.sgd = {0.1, 0.9, 5e-4};
    tcfg.batch_aux = 8;
    tcfg.stage1_steps = 300;
    tcfg.lr_decay_steps = 200;
    tcfg.lr_decay_factor = 0.5;
    tcfg.weights.lambda_sr = 12.288;  // 0.003 per-pixel-sum equivalent at 64x64
    tcfg.seed = 99;
    train::Trainer trainer(model, tcfg);
    trainer.train_stage1(train_pairs);

    double bicubic_psnr = 0, sr_psnr = 0;
    for (const auto& p : test_pairs) {
        bicubic_psnr += sr::psnr(p.input_lr, p.target_hr);
        Tensor out = model.sr().forward(p.input_lr, nullptr);
        out.clamp01();
        sr_psnr += sr::psnr(out, p.target_hr);
    }
    bicubic_psnr /= test_pairs.size();
    sr_psnr /= test_pairs.size();
    double gain = sr_psnr - bicubic_psnr;
    std::string detail = "held-out PSNR: bicubic " + fmt(bicubic_psnr, 3) + " dB, SR " +
                         fmt(sr_psnr, 3) + " dB, gain " + fmt(gain, 3) + " dB (need >= 0.1)";
    return {gain >= 0.1, detail};
}

// ---------------------------------------------------------------------------
// 7. Ablation ordering on the desk-scale benchmark
// ---------------------------------------------------------------------------
cli::ExperimentConfig ablation_config(const fs::path& corpus, const fs::path& ws, uint64_t seed) {
    cli::ExperimentConfig cfg;
    cfg.corpus_root = corpus;
    cfg.workspace = ws;
    cfg.degrade.lr_height = 10;
    cfg.degrade.lr_width = 8;
    cfg.degrade.blur_sigma = 1.0;
    cfg.degrade.noise_sigma = 0.03;
    cfg.sr.depth = 4;
    cfg.sr.channels = 16;
    cfg.fr_input_size = 32;
    cfg.trunk_channels = {16, 32, 64};
    cfg.embedding_dim = 48;
    cfg.train.sgd = {0.1, 0.9, 5e-4};
    cfg.train.batch_aux = 8;
    cfg.train.batch_nat = 8;
    cfg.train.stage1_steps = 400;
    cfg.train.stage2_steps = 400;
    cfg.train.lr_decay_steps = 300;
    cfg.train.lr_decay_factor = 0.5;
    cfg.train.weights.lambda_sr = 3.072;  // 0.003 sum-equivalent at 32x32
    cfg.eval_k = 50;
    cfg.seed = seed;
    cfg.variants = {train::Variant::csri, train::Variant::joint_sr_fr,
                    train::Variant::independent_sr_fr};
    return cfg;
}

Outcome criterion7() {
    fs::path dir = scratch_dir("c7");
    synth::CorpusSpec spec;
    spec.identities = 41;
    spec.images_per_identity = 12;
    spec.image_size = 32;
    spec.distractor_images = 240;
    spec.seed = 2024;
    fs::path corpus = dir / "corpus";
    synth::generate_corpus(spec, corpus);

    int ordered = 0;
    std::string detail;
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        fs::path ws = dir / ("ws_seed" + std::to_string(seed));
        cli::ExperimentConfig cfg = ablation_config(corpus, ws, seed);
        cli::cmd_prepare(cfg);
        std::map<train::Variant, double> rank1;
        for (train::Variant v : cfg.variants) {
            cli::cmd_train(cfg, v);
            eval::EvalReport rep = cli::cmd_eval(cfg, v);
            rank1[v] = eval::rank_k(rep, 1);
        }
        bool ok = rank1[train::Variant::csri] > rank1[train::Variant::joint_sr_fr] &&
                  rank1[train::Variant::joint_sr_fr] > rank1[train::Variant::independent_sr_fr];
        ordered += ok ? 1 : 0;
        detail += "seed " + std::to_string(seed) + ": csri " +
                  fmt(rank1[train::Variant::csri], 3) + " vs joint " +
                  fmt(rank1[train::Variant::joint_sr_fr], 3) + " vs independent " +
                  fmt(rank1[train::Variant::independent_sr_fr], 3) + (ok ? " [ordered] " : " [x] ");
    }
    fs::remove_all(dir);
    return {ordered >= 2, detail + "-> ordered in " + std::to_string(ordered) + "/3 seeds (need >= 2)"};
}

// ---------------------------------------------------------------------------
// 8. Protocol determinism
// ---------------------------------------------------------------------------
Outcome criterion8() {
    std::vector<int> full(5139);
    for (int i = 0; i < 5139; ++i) full[i] = i;
    auto [ftrain, ftest] = data::split_identities(full, 12345);
    if (ftrain.size() != 2570 || ftest.size() != 2569)
        return {false, "5139 identities split into " + std::to_string(ftrain.size()) + "/" +
                           std::to_string(ftest.size()) + ", want 2570/2569"};

    fs::path dir = scratch_dir("c8");
    synth::CorpusSpec spec;
    spec.identities = 41;
    spec.images_per_identity = 4;
    spec.image_size = 16;
    spec.distractor_images = 20;
    spec.seed = 88;
    fs::path corpus = dir / "corpus";
    synth::generate_corpus(spec, corpus);

    cli::ExperimentConfig cfg;
    cfg.corpus_root = corpus;
    cfg.workspace = dir / "ws1";
    cfg.degrade.lr_height = 8;
    cfg.degrade.lr_width = 8;
    cfg.degrade.blur_sigma = 0.8;
    cfg.degrade.noise_sigma = 0.03;
    cfg.fr_input_size = 16;
    cfg.seed = 31337;
    cli::cmd_prepare(cfg);

    data::SplitManifest train_m = data::load_manifest(dir / "ws1/manifests/train.tsv");
    std::set<int> train_ids;
    for (const auto& r : train_m.records)
        if (r.identity) train_ids.insert(*r.identity);
    data::SplitManifest eval_m = data::load_manifest(dir / "ws1/manifests/eval.tsv");
    std::set<int> test_ids;
    for (const auto& r : eval_m.records)
        if (r.identity) test_ids.insert(*r.identity);
    if (train_ids.size() != 21 || test_ids.size() != 20)
        return {false, "41-identity corpus split into " + std::to_string(train_ids.size()) + "/" +
                           std::to_string(test_ids.size()) + " identities, want 21/20"};

    cli::ExperimentConfig cfg2 = cfg;
    cfg2.workspace = dir / "ws2";
    cli::cmd_prepare(cfg2);

    // compare every artifact byte for byte (manifests, config copy, images)
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    size_t files = 0;
    for (auto it = fs::recursive_directory_iterator(dir / "ws1");
         it != fs::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        fs::path rel = fs::relative(it->path(), dir / "ws1");
        if (rel == fs::path("config.ini")) continue;  // differs by workspace path, by design
        if (slurp(it->path()) != slurp(dir / "ws2" / rel))
            return {false, "artifact differs across identical runs: " + rel.string()};
        ++files;
    }
    fs::remove_all(dir);
    return {true, "prepare byte-identical across runs (" + std::to_string(files) +
                      " files); splits 5139->2570/2569 and 41->21/20"};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {1, "loss arithmetic", criterion1},
        {2, "cross-entropy fixed points", criterion2},
        {3, "gradient correctness", criterion3},
        {4, "metric oracle equivalence", criterion4},
        {5, "parameter sharing", criterion5},
        {6, "SR utility", criterion6},
        {7, "ablation ordering", criterion7},
        {8, "protocol determinism", criterion8},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
                  << "): " << o.detail << "\n";
        if (!o.pass) ++failures;
    }
    return failures;
}
