#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace csri::eval {

using Vec = Eigen::VectorXd;

// Gallery indices sorted by squared Euclidean distance to the probe,
// ascending, ties broken by ascending gallery index. Squared distances are
// rank-equivalent to Euclidean ones.
struct RankedRow {
    std::vector<int> order;
    std::vector<double> dist2;  // aligned with order, non-decreasing
};

RankedRow rank_gallery(const Vec& probe, const std::vector<Vec>& gallery);

// cmc[k-1] = (#probes whose best true-match rank <= k) / #probes, k = 1..K.
// Every probe must have at least one true match.
std::vector<double> cmc_curve(const std::vector<std::vector<int>>& rankings,
                              const std::vector<std::vector<uint8_t>>& truth, int K);

// Definitional retrieval AP without interpolation:
// (1/R) * sum over true-match positions k of precision@k.
double average_precision(const std::vector<int>& ranking, const std::vector<uint8_t>& is_match);

struct EvalReport {
    std::vector<double> cmc;          // ranks 1..k
    std::vector<double> per_probe_ap; // probe order
    double map = 0.0;
    int probe_count = 0;
    int gallery_size = 0;
    int distractor_count = 0;
    int k = 0;              // reported rank cutoff (possibly truncated)
    bool truncated = false; // requested K exceeded the gallery size
    uint64_t seed = 0;
    std::string config_hash;
};

// Per-probe rankings and truth rows, as consumed by the curve writers.
struct EvalDetail {
    std::vector<std::vector<int>> rankings;
    std::vector<std::vector<uint8_t>> truth;
};

// Full protocol evaluation: rank every probe against the gallery, assemble
// the CMC curve up to rank K (truncated at the gallery size), per-probe APs
// and their mean. Distractors are the unlabelled gallery entries.
EvalReport evaluate(const std::vector<Vec>& probes, const std::vector<int>& probe_labels,
                    const std::vector<Vec>& gallery,
                    const std::vector<std::optional<int>>& gallery_labels, int K,
                    EvalDetail* detail = nullptr);

// cmc value at rank k, reading past-the-end ranks as the last entry
// (the curve is constant once every probe has matched).
double rank_k(const EvalReport& r, int k);

}  // namespace csri::eval
