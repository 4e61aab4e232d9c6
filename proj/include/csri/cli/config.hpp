#pragma once

#include <filesystem>

#include "csri/data/types.hpp"
#include "csri/sr/network.hpp"
#include "csri/train/trainer.hpp"

namespace csri::cli {

// Experiment configuration, read from a sectioned key=value text file.
// One master seed drives the data splits, the degradation noise and the
// training batch order; sub-seeds are derived internally.
struct ExperimentConfig {
    std::filesystem::path corpus_root;  // [paths] corpus
    std::filesystem::path workspace;    // [paths] workspace

    data::DegradationConfig degrade;    // [degradation]
    sr::SRNetworkConfig sr;             // [sr]

    int fr_input_size = 64;             // [fr]
    int fr_kernel = 3;
    std::vector<int> trunk_channels{32, 64, 128};
    int embedding_dim = 64;

    train::TrainConfig train;           // [train] (seed derived from master)

    int eval_k = 50;                    // [eval]

    uint64_t seed = 1;                  // [experiment]
    std::vector<train::Variant> variants{
        train::Variant::csri, train::Variant::joint_sr_fr, train::Variant::independent_sr_fr,
        train::Variant::fr_only};
};

// Derived sub-seeds.
uint64_t split_seed(const ExperimentConfig& cfg);
uint64_t degrade_seed(const ExperimentConfig& cfg);
uint64_t train_seed(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::filesystem::path& file);
void write_config(const ExperimentConfig& cfg, const std::filesystem::path& file);

// Canonical serialized form (what write_config emits); the config hash is the
// FNV-1a64 of this text, stamped into every artifact.
std::string canonical_config_text(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

// Workspace layout helpers.
std::filesystem::path manifests_dir(const ExperimentConfig& cfg);
std::filesystem::path images_dir(const ExperimentConfig& cfg);
std::filesystem::path checkpoints_dir(const ExperimentConfig& cfg);
std::filesystem::path logs_dir(const ExperimentConfig& cfg);
std::filesystem::path reports_dir(const ExperimentConfig& cfg);

}  // namespace csri::cli
