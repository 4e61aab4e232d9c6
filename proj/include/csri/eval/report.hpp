#pragma once

#include <filesystem>

#include "csri/eval/metrics.hpp"

namespace csri::eval {

// Structured report: rank-1/20/50, mAP, the full CMC curve, per-probe APs
// and protocol metadata.
void write_report_json(const EvalReport& r, const std::filesystem::path& file);
EvalReport load_report_json(const std::filesystem::path& file);

// "rank,match_rate" rows.
void write_cmc_csv(const EvalReport& r, const std::filesystem::path& file);

// Per-probe precision/recall points: "probe,rank,precision,recall" rows,
// one row per (probe, rank) position. Rankings/truth as used in evaluate().
void write_pr_csv(const std::vector<std::vector<int>>& rankings,
                  const std::vector<std::vector<uint8_t>>& truth,
                  const std::filesystem::path& file);

}  // namespace csri::eval
