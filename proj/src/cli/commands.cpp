#include "csri/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "csri/data/dataset.hpp"
#include "csri/data/degrade.hpp"
#include "csri/data/split.hpp"
#include "csri/eval/report.hpp"
#include "csri/image_io.hpp"
#include "csri/resize.hpp"
#include "csri/train/checkpoint.hpp"

namespace csri::cli {

namespace fs = std::filesystem;

namespace {

struct CorpusIdentity {
    std::string name;
    int label = -1;
    std::vector<fs::path> images;
};

bool is_image_file(const fs::path& p) {
    auto ext = p.extension().string();
    return ext == ".pgm" || ext == ".ppm";
}

std::vector<fs::path> sorted_images(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

// Identity subdirectories in sorted order; the label is the sorted position.
std::vector<CorpusIdentity> scan_corpus(const fs::path& root) {
    if (!fs::is_directory(root))
        throw std::runtime_error("corpus root '" + root.string() + "' is not a directory");
    std::vector<CorpusIdentity> ids;
    for (const auto& e : fs::directory_iterator(root)) {
        if (!e.is_directory() || e.path().filename() == "distractors") continue;
        CorpusIdentity ci;
        ci.name = e.path().filename().string();
        ci.images = sorted_images(e.path());
        if (ci.images.empty())
            throw std::runtime_error("identity directory '" + ci.name + "' has no images");
        ids.push_back(std::move(ci));
    }
    std::sort(ids.begin(), ids.end(),
              [](const CorpusIdentity& a, const CorpusIdentity& b) { return a.name < b.name; });
    for (size_t i = 0; i < ids.size(); ++i) ids[i].label = static_cast<int>(i);
    return ids;
}

Tensor load_hr(const fs::path& file, int target_size) {
    Tensor img = read_image(file);
    if (img.ch != 1)
        throw std::runtime_error("expected grayscale corpus image: " + file.string());
    Tensor out = resize_bicubic(img, target_size, target_size);
    out.clamp01();
    return out;
}

data::DegradationConfig per_image_cfg(const ExperimentConfig& cfg, const std::string& rel_path) {
    data::DegradationConfig d = cfg.degrade;
    d.seed = mix_seed(degrade_seed(cfg), fnv1a64(rel_path));
    return d;
}

fr::FRNetworkConfig make_fr_config(const ExperimentConfig& cfg, int syn_classes, int nat_classes) {
    fr::FRNetworkConfig f;
    f.trunk_channels = cfg.trunk_channels;
    f.kernel = cfg.fr_kernel;
    f.input_size = cfg.fr_input_size;
    f.in_channels = 1;
    f.embedding_dim = cfg.embedding_dim;
    f.syn_classes = std::max(1, syn_classes);
    f.nat_classes = std::max(1, nat_classes);
    return f;
}

void append_log(std::vector<train::StepLog>& all, const std::vector<train::StepLog>& part) {
    all.insert(all.end(), part.begin(), part.end());
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void cmd_prepare(const ExperimentConfig& cfg) {
    data::validate(cfg.degrade);
    if (cfg.fr_input_size < cfg.degrade.lr_height || cfg.fr_input_size < cfg.degrade.lr_width)
        throw std::invalid_argument("fr input size smaller than the LR target");

    std::vector<CorpusIdentity> ids = scan_corpus(cfg.corpus_root);
    if (ids.size() < 2) throw std::runtime_error("corpus must contain at least 2 identities");

    std::vector<int> labels;
    for (const auto& ci : ids) labels.push_back(ci.label);
    auto [train_ids, test_ids] = data::split_identities(labels, split_seed(cfg));
    std::cout << "prepare: " << ids.size() << " identities -> " << train_ids.size() << " train / "
              << test_ids.size() << " test\n";

    // Guard the probe/gallery precondition early, naming the identity.
    for (int id : test_ids)
        if (ids[id].images.size() < 2)
            throw std::runtime_error("test identity '" + ids[id].name + "' (label " +
                                     std::to_string(id) + ") has only " +
                                     std::to_string(ids[id].images.size()) +
                                     " image(s); every probe needs a true match");

    const fs::path ws = cfg.workspace;
    fs::create_directories(manifests_dir(cfg));
    fs::create_directories(images_dir(cfg) / "aux");
    fs::create_directories(images_dir(cfg) / "native" / "train");
    fs::create_directories(images_dir(cfg) / "native" / "test");
    fs::create_directories(images_dir(cfg) / "native" / "distractor");

    const std::string hash = config_hash(cfg);
    char buf[64];

    data::SplitManifest train_manifest;
    train_manifest.dataset = "train";
    train_manifest.seed = cfg.seed;
    train_manifest.config_hash = hash;

    for (int id : train_ids) {
        const CorpusIdentity& ci = ids[id];
        fs::create_directories(images_dir(cfg) / "aux" / ci.name);
        fs::create_directories(images_dir(cfg) / "native" / "train" / ci.name);
        for (size_t i = 0; i < ci.images.size(); ++i) {
            Tensor hr = load_hr(ci.images[i], cfg.fr_input_size);
            std::snprintf(buf, sizeof(buf), "img_%03zu", i);
            if (i % 2 == 0) {  // auxiliary pair
                std::string rel = "images/aux/" + ci.name + "/" + buf;
                data::LRHRPair pair = data::make_lr_hr_pair(hr, cfg.degrade, id);
                write_image(ws / (rel + "_hr.pgm"), pair.target_hr);
                write_image(ws / (rel + "_lr.pgm"), pair.input_lr);
                train_manifest.records.push_back(
                    {rel + "_hr.pgm", id, data::Domain::auxiliary, data::Role::train});
            } else {  // native-degraded labelled training image
                std::string rel = "images/native/train/" + ci.name + "/" + std::string(buf) + ".pgm";
                Tensor lr = data::degrade_native(hr, per_image_cfg(cfg, rel));
                write_image(ws / rel, lr);
                train_manifest.records.push_back({rel, id, data::Domain::native, data::Role::train});
            }
        }
    }
    std::sort(train_manifest.records.begin(), train_manifest.records.end(),
              [](const data::FaceRecord& a, const data::FaceRecord& b) {
                  return a.image_path < b.image_path;
              });
    data::write_manifest(train_manifest, manifests_dir(cfg) / "train.tsv");

    std::vector<data::FaceRecord> test_records;
    for (int id : test_ids) {
        const CorpusIdentity& ci = ids[id];
        fs::create_directories(images_dir(cfg) / "native" / "test" / ci.name);
        for (size_t i = 0; i < ci.images.size(); ++i) {
            Tensor hr = load_hr(ci.images[i], cfg.fr_input_size);
            std::snprintf(buf, sizeof(buf), "img_%03zu.pgm", i);
            std::string rel = "images/native/test/" + ci.name + "/" + buf;
            Tensor lr = data::degrade_native(hr, per_image_cfg(cfg, rel));
            write_image(ws / rel, lr);
            test_records.push_back({rel, id, data::Domain::native, data::Role::train});
        }
    }

    std::vector<data::FaceRecord> distractor_records;
    fs::path dpool = cfg.corpus_root / "distractors";
    if (fs::is_directory(dpool)) {
        std::vector<fs::path> files = sorted_images(dpool);
        for (size_t j = 0; j < files.size(); ++j) {
            Tensor hr = load_hr(files[j], cfg.fr_input_size);
            std::snprintf(buf, sizeof(buf), "d_%05zu.pgm", j);
            std::string rel = "images/native/distractor/" + std::string(buf);
            Tensor lr = data::degrade_native(hr, per_image_cfg(cfg, rel));
            write_image(ws / rel, lr);
            distractor_records.push_back(
                {rel, std::nullopt, data::Domain::native, data::Role::gallery_distractor});
        }
    }

    data::SplitManifest eval_manifest =
        data::build_probe_gallery(test_records, distractor_records, mix_seed(cfg.seed, 0xE7A1));
    eval_manifest.dataset = "eval";
    eval_manifest.seed = cfg.seed;
    eval_manifest.config_hash = hash;
    data::write_manifest(eval_manifest, manifests_dir(cfg) / "eval.tsv");

    write_config(cfg, ws / "config.ini");

    data::RoleCounts tc = train_manifest.counts(), ec = eval_manifest.counts();
    std::cout << "prepare: train records " << tc.train << " (aux+native), probe " << ec.probe
              << ", gallery_match " << ec.gallery_match << ", distractors "
              << ec.gallery_distractor << "\n";
    std::cout << "prepare: config_hash " << hash << "\n";
}

std::filesystem::path cmd_train(const ExperimentConfig& cfg_in, train::Variant variant) {
    ExperimentConfig cfg = cfg_in;
    cfg.train.seed = train_seed(cfg);
    const std::string hash = config_hash(cfg_in);

    data::SplitManifest train_manifest = data::load_manifest(manifests_dir(cfg) / "train.tsv");
    data::LabelMap aux_map =
        data::build_label_map(train_manifest.records, data::Domain::auxiliary, data::Role::train);
    data::LabelMap nat_map =
        data::build_label_map(train_manifest.records, data::Domain::native, data::Role::train);

    std::vector<data::LRHRPair> aux = data::load_aux_pairs(train_manifest, cfg.workspace, aux_map);
    data::NativeTrainSet nat =
        data::load_native_train(train_manifest, cfg.workspace, nat_map, cfg.fr_input_size);
    if (aux.empty()) throw std::runtime_error("no auxiliary training pairs in the manifest");

    const bool needs_native =
        variant == train::Variant::csri || variant == train::Variant::joint_sr_fr;
    if (needs_native && nat.images.empty())
        throw std::runtime_error("variant " + std::string(train::to_string(variant)) +
                                 " needs native training records");

    std::optional<sr::SRNetworkConfig> sr_cfg;
    if (variant != train::Variant::fr_only) {
        sr_cfg = cfg.sr;
        sr_cfg->in_channels = 1;
    }
    train::CsriModel model(sr_cfg, make_fr_config(cfg, aux_map.classes(), nat_map.classes()));
    Rng init_rng(cfg.train.seed);
    model.init_params(init_rng);

    fs::create_directories(checkpoints_dir(cfg));
    fs::create_directories(logs_dir(cfg));

    train::Trainer trainer(model, cfg.train);
    std::vector<train::StepLog> log;
    train::CheckpointMeta meta;
    meta.variant = train::to_string(variant);
    meta.config_hash = hash;
    meta.seed = cfg_in.seed;
    meta.lambda_sr = cfg.train.weights.lambda_sr;

    auto save_stage = [&](const std::string& suffix) {
        meta.step = trainer.step();
        fs::path p = checkpoints_dir(cfg) / (std::string(train::to_string(variant)) + suffix);
        train::save_checkpoint(p, model, meta);
        return p;
    };

    std::cout << "train[" << train::to_string(variant) << "]: aux pairs " << aux.size()
              << ", native train " << nat.images.size() << ", syn/nat classes "
              << aux_map.classes() << "/" << nat_map.classes() << "\n";

    switch (variant) {
        case train::Variant::csri: {
            append_log(log, trainer.train_stage1(aux));
            save_stage("_stage1.ckpt");
            append_log(log, trainer.train_stage2(aux, nat.images, nat.labels, true));
            break;
        }
        case train::Variant::joint_sr_fr: {
            append_log(log, trainer.train_stage1(aux));
            save_stage("_stage1.ckpt");
            append_log(log, trainer.train_stage2(aux, nat.images, nat.labels, false));
            break;
        }
        case train::Variant::independent_sr_fr: {
            append_log(log, trainer.train_sr_only(aux, cfg.train.stage1_steps));
            save_stage("_stage1.ckpt");
            append_log(log, trainer.train_fr_on_frozen_sr(
                                aux, cfg.train.stage1_steps + cfg.train.stage2_steps));
            break;
        }
        case train::Variant::fr_only: {
            append_log(log, trainer.train_fr_direct(
                                aux, cfg.train.stage1_steps + cfg.train.stage2_steps));
            break;
        }
    }

    fs::path final_path = save_stage(".ckpt");
    train::write_loss_csv(
        logs_dir(cfg) / (std::string(train::to_string(variant)) + "_losses.csv"), log, hash);

    if (!log.empty())
        std::cout << "train[" << train::to_string(variant) << "]: " << log.size()
                  << " steps, final l_csrl " << fmt4(log.back().losses.l_csrl) << "\n";
    return final_path;
}

eval::EvalReport cmd_eval(const ExperimentConfig& cfg, train::Variant variant,
                          const std::optional<std::filesystem::path>& checkpoint) {
    fs::path ckpt = checkpoint.value_or(checkpoints_dir(cfg) /
                                        (std::string(train::to_string(variant)) + ".ckpt"));
    if (!fs::exists(ckpt))
        throw std::runtime_error("missing checkpoint '" + ckpt.string() + "': train variant " +
                                 train::to_string(variant) + " first");
    train::CheckpointMeta meta;
    train::CsriModel model = train::load_checkpoint(ckpt, &meta);

    fs::path eval_tsv = manifests_dir(cfg) / "eval.tsv";
    if (!fs::exists(eval_tsv))
        throw std::runtime_error("missing eval manifest '" + eval_tsv.string() +
                                 "': run prepare first");
    data::SplitManifest m = data::load_manifest(eval_tsv);
    data::EvalSet set = data::load_eval_set(m, cfg.workspace);

    std::vector<eval::Vec> probe_f = train::extract_features(set.probe_images, model);
    std::vector<eval::Vec> gallery_f = train::extract_features(set.gallery_images, model);

    if (cfg.eval_k > static_cast<int>(gallery_f.size()))
        std::cerr << "warning: K=" << cfg.eval_k << " exceeds gallery size " << gallery_f.size()
                  << "; CMC curve truncated\n";

    eval::EvalDetail detail;
    eval::EvalReport rep = eval::evaluate(probe_f, set.probe_labels, gallery_f,
                                          set.gallery_labels, cfg.eval_k, &detail);
    rep.seed = cfg.seed;
    rep.config_hash = config_hash(cfg);

    fs::create_directories(reports_dir(cfg));
    std::string stem = train::to_string(variant);
    eval::write_report_json(rep, reports_dir(cfg) / (stem + ".json"));
    eval::write_cmc_csv(rep, reports_dir(cfg) / (stem + "_cmc.csv"));
    eval::write_pr_csv(detail.rankings, detail.truth, reports_dir(cfg) / (stem + "_pr.csv"));

    std::cout << "eval[" << stem << "]: rank1 " << fmt4(eval::rank_k(rep, 1)) << ", rank20 "
              << fmt4(eval::rank_k(rep, 20)) << ", rank50 " << fmt4(eval::rank_k(rep, 50))
              << ", mAP " << fmt4(rep.map) << " (gallery " << rep.gallery_size << ", "
              << rep.distractor_count << " distractors)\n";
    return rep;
}

std::string cmd_compare(const ExperimentConfig& cfg) {
    struct Row {
        std::string name;
        double rank1, rank20, rank50, map;
    };
    std::vector<Row> rows;
    for (train::Variant v : cfg.variants) {
        fs::path p = reports_dir(cfg) / (std::string(train::to_string(v)) + ".json");
        if (!fs::exists(p))
            throw std::runtime_error("missing eval report for variant '" +
                                     std::string(train::to_string(v)) +
                                     "': run eval for it first");
        eval::EvalReport r = eval::load_report_json(p);
        rows.push_back({train::to_string(v), eval::rank_k(r, 1), eval::rank_k(r, 20),
                        eval::rank_k(r, 50), r.map});
    }

    auto find = [&](const std::string& name) -> const Row* {
        for (const auto& r : rows)
            if (r.name == name) return &r;
        return nullptr;
    };
    struct Delta {
        std::string name;
        double rank1, rank20, rank50, map;
    };
    std::vector<Delta> deltas;
    const Row* csri = find("csri");
    const Row* joint = find("joint_sr_fr");
    const Row* indep = find("independent_sr_fr");
    if (csri && joint)
        deltas.push_back({"csri-joint_sr_fr", csri->rank1 - joint->rank1,
                          csri->rank20 - joint->rank20, csri->rank50 - joint->rank50,
                          csri->map - joint->map});
    if (joint && indep)
        deltas.push_back({"joint_sr_fr-independent_sr_fr", joint->rank1 - indep->rank1,
                          joint->rank20 - indep->rank20, joint->rank50 - indep->rank50,
                          joint->map - indep->map});

    std::ostringstream text;
    char line[256];
    std::snprintf(line, sizeof(line), "%-30s %8s %8s %8s %8s\n", "variant", "rank1", "rank20",
                  "rank50", "mAP");
    text << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%-30s %8.4f %8.4f %8.4f %8.4f\n", r.name.c_str(),
                      r.rank1, r.rank20, r.rank50, r.map);
        text << line;
    }
    if (!deltas.empty()) {
        text << "\n";
        std::snprintf(line, sizeof(line), "%-30s %8s %8s %8s %8s\n", "delta", "rank1", "rank20",
                      "rank50", "mAP");
        text << line;
        for (const auto& d : deltas) {
            std::snprintf(line, sizeof(line), "%-30s %+8.4f %+8.4f %+8.4f %+8.4f\n",
                          d.name.c_str(), d.rank1, d.rank20, d.rank50, d.map);
            text << line;
        }
    }

    fs::create_directories(reports_dir(cfg));
    {
        std::ofstream out(reports_dir(cfg) / "comparison.txt", std::ios::binary);
        out << text.str();
    }
    {
        std::ofstream out(reports_dir(cfg) / "comparison.csv", std::ios::binary);
        out.precision(17);
        out << "row,name,rank1,rank20,rank50,map\n";
        for (const auto& r : rows)
            out << "variant," << r.name << "," << r.rank1 << "," << r.rank20 << "," << r.rank50
                << "," << r.map << "\n";
        for (const auto& d : deltas)
            out << "delta," << d.name << "," << d.rank1 << "," << d.rank20 << "," << d.rank50
                << "," << d.map << "\n";
    }

    std::cout << text.str();
    return text.str();
}

}  // namespace csri::cli
