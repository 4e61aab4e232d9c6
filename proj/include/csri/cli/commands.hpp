#pragma once

#include <optional>

#include "csri/cli/config.hpp"
#include "csri/eval/metrics.hpp"

namespace csri::cli {

// Synthesizes both domains from the corpus and writes all manifests:
//  - labelled identities are split into train/test halves;
//  - train identities contribute alternating images to the auxiliary paired
//    set (clean LR/HR) and the native-degraded labelled training set;
//  - every test-identity image is native-degraded and assigned to probe or
//    gallery; the unlabelled distractor pool joins the gallery.
// Deterministic: byte-identical outputs for identical config + seed.
void cmd_prepare(const ExperimentConfig& cfg);

// Trains one variant and writes its checkpoints and per-step loss CSV.
// Returns the final checkpoint path.
std::filesystem::path cmd_train(const ExperimentConfig& cfg, train::Variant variant);

// Extracts probe/gallery features through the deployment branch of the
// checkpoint and writes the report JSON plus CMC/PR curve CSVs.
eval::EvalReport cmd_eval(const ExperimentConfig& cfg, train::Variant variant,
                          const std::optional<std::filesystem::path>& checkpoint = std::nullopt);

// One comparison table (text + CSV) of rank-1/20/50/mAP per variant with the
// headline pairwise deltas. Requires prior cmd_eval runs for each variant.
std::string cmd_compare(const ExperimentConfig& cfg);

}  // namespace csri::cli
