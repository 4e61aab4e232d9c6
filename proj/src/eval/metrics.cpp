#include "csri/eval/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace csri::eval {

RankedRow rank_gallery(const Vec& probe, const std::vector<Vec>& gallery) {
    if (gallery.empty()) throw std::invalid_argument("rank_gallery: empty gallery");
    const size_t n = gallery.size();
    std::vector<double> d2(n);
    for (size_t i = 0; i < n; ++i) {
        if (gallery[i].size() != probe.size())
            throw std::invalid_argument("rank_gallery: embedding dimension mismatch at index " +
                                        std::to_string(i));
        double acc = 0.0;
        for (long j = 0; j < probe.size(); ++j) {
            double d = probe[j] - gallery[i][j];
            acc += d * d;
        }
        d2[i] = acc;
    }

    RankedRow row;
    row.order.resize(n);
    for (size_t i = 0; i < n; ++i) row.order[i] = static_cast<int>(i);
    std::sort(row.order.begin(), row.order.end(), [&](int a, int b) {
        if (d2[a] != d2[b]) return d2[a] < d2[b];
        return a < b;
    });
    row.dist2.resize(n);
    for (size_t i = 0; i < n; ++i) row.dist2[i] = d2[row.order[i]];
    return row;
}

std::vector<double> cmc_curve(const std::vector<std::vector<int>>& rankings,
                              const std::vector<std::vector<uint8_t>>& truth, int K) {
    if (rankings.empty()) throw std::invalid_argument("cmc_curve: no probes");
    if (rankings.size() != truth.size())
        throw std::invalid_argument("cmc_curve: rankings/truth size mismatch");
    if (K < 1) throw std::invalid_argument("cmc_curve: K must be >= 1");

    std::vector<long> best_rank(rankings.size(), -1);
    for (size_t p = 0; p < rankings.size(); ++p) {
        const auto& order = rankings[p];
        const auto& is_match = truth[p];
        for (size_t r = 0; r < order.size(); ++r) {
            int g = order[r];
            if (g < 0 || static_cast<size_t>(g) >= is_match.size())
                throw std::invalid_argument("cmc_curve: ranking index out of range");
            if (is_match[g]) {
                best_rank[p] = static_cast<long>(r) + 1;
                break;
            }
        }
        if (best_rank[p] < 0)
            throw std::invalid_argument("cmc_curve: probe " + std::to_string(p) +
                                        " has no true match in the gallery");
    }

    std::vector<double> cmc(K, 0.0);
    for (int k = 1; k <= K; ++k) {
        size_t hits = 0;
        for (long br : best_rank)
            if (br <= k) ++hits;
        cmc[k - 1] = static_cast<double>(hits) / static_cast<double>(rankings.size());
    }
    return cmc;
}

double average_precision(const std::vector<int>& ranking, const std::vector<uint8_t>& is_match) {
    size_t total_matches = 0;
    for (uint8_t m : is_match)
        if (m) ++total_matches;
    if (total_matches == 0)
        throw std::invalid_argument("average_precision: no true match in the gallery");

    double sum = 0.0;
    size_t found = 0;
    for (size_t r = 0; r < ranking.size(); ++r) {
        int g = ranking[r];
        if (g < 0 || static_cast<size_t>(g) >= is_match.size())
            throw std::invalid_argument("average_precision: ranking index out of range");
        if (is_match[g]) {
            ++found;
            sum += static_cast<double>(found) / static_cast<double>(r + 1);
        }
    }
    if (found != total_matches)
        throw std::invalid_argument("average_precision: ranking is not a full permutation");
    return sum / static_cast<double>(total_matches);
}

EvalReport evaluate(const std::vector<Vec>& probes, const std::vector<int>& probe_labels,
                    const std::vector<Vec>& gallery,
                    const std::vector<std::optional<int>>& gallery_labels, int K,
                    EvalDetail* detail) {
    if (probes.empty()) throw std::invalid_argument("evaluate: no probes");
    if (probes.size() != probe_labels.size())
        throw std::invalid_argument("evaluate: probes/labels size mismatch");
    if (gallery.size() != gallery_labels.size())
        throw std::invalid_argument("evaluate: gallery/labels size mismatch");
    if (gallery.empty()) throw std::invalid_argument("evaluate: empty gallery");
    if (K < 1) throw std::invalid_argument("evaluate: K must be >= 1");

    EvalReport rep;
    rep.probe_count = static_cast<int>(probes.size());
    rep.gallery_size = static_cast<int>(gallery.size());
    for (const auto& l : gallery_labels)
        if (!l) ++rep.distractor_count;
    rep.truncated = K > rep.gallery_size;
    rep.k = std::min(K, rep.gallery_size);

    std::vector<std::vector<int>> rankings(probes.size());
    std::vector<std::vector<uint8_t>> truth(probes.size());
    rep.per_probe_ap.resize(probes.size());
    for (size_t p = 0; p < probes.size(); ++p) {
        RankedRow row = rank_gallery(probes[p], gallery);
        truth[p].resize(gallery.size());
        for (size_t g = 0; g < gallery.size(); ++g)
            truth[p][g] = gallery_labels[g] && *gallery_labels[g] == probe_labels[p] ? 1 : 0;
        rep.per_probe_ap[p] = average_precision(row.order, truth[p]);
        rankings[p] = std::move(row.order);
    }

    rep.cmc = cmc_curve(rankings, truth, rep.k);
    double sum = 0.0;
    for (double ap : rep.per_probe_ap) sum += ap;
    rep.map = sum / static_cast<double>(rep.per_probe_ap.size());
    if (detail) {
        detail->rankings = std::move(rankings);
        detail->truth = std::move(truth);
    }
    return rep;
}

double rank_k(const EvalReport& r, int k) {
    if (r.cmc.empty()) throw std::invalid_argument("rank_k: empty report");
    size_t idx = std::min<size_t>(static_cast<size_t>(std::max(k, 1)), r.cmc.size());
    return r.cmc[idx - 1];
}

}  // namespace csri::eval
