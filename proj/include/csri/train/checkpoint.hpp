#pragma once

#include <filesystem>

#include "csri/train/model.hpp"

namespace csri::train {

struct CheckpointMeta {
    std::string variant = "csri";
    std::string config_hash;
    uint64_t seed = 0;
    long step = 0;
    double lambda_sr = 0.003;
};

// Single-container checkpoint: a text header (format version, architecture,
// metadata) followed by named parameter blocks with shapes and 32-bit
// little-endian float payloads. Optimizer momentum is stored as "opt.<name>"
// blocks. Each parameter appears exactly once; the two branches reference
// this single copy.
void save_checkpoint(const std::filesystem::path& file, CsriModel& model,
                     const CheckpointMeta& meta);

CsriModel load_checkpoint(const std::filesystem::path& file, CheckpointMeta* meta_out = nullptr);

// Names of the value blocks in a checkpoint file, in file order (no payloads
// read). Used to audit block layout.
std::vector<std::string> checkpoint_block_names(const std::filesystem::path& file);

}  // namespace csri::train
