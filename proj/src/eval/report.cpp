#include "csri/eval/report.hpp"

#include <fstream>

#include "json.hpp"

namespace csri::eval {

using nlohmann::json;

void write_report_json(const EvalReport& r, const std::filesystem::path& file) {
    json j;
    j["rank1"] = rank_k(r, 1);
    j["rank20"] = rank_k(r, 20);
    j["rank50"] = rank_k(r, 50);
    j["map"] = r.map;
    j["cmc"] = r.cmc;
    j["per_probe_ap"] = r.per_probe_ap;
    j["probe_count"] = r.probe_count;
    j["gallery_size"] = r.gallery_size;
    j["distractor_count"] = r.distractor_count;
    j["k"] = r.k;
    j["truncated"] = r.truncated;
    j["seed"] = r.seed;
    j["config_hash"] = r.config_hash;

    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + file.string());
    out << j.dump(2) << "\n";
}

EvalReport load_report_json(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open report: " + file.string());
    json j = json::parse(in);

    EvalReport r;
    r.cmc = j.at("cmc").get<std::vector<double>>();
    r.per_probe_ap = j.at("per_probe_ap").get<std::vector<double>>();
    r.map = j.at("map").get<double>();
    r.probe_count = j.at("probe_count").get<int>();
    r.gallery_size = j.at("gallery_size").get<int>();
    r.distractor_count = j.at("distractor_count").get<int>();
    r.k = j.at("k").get<int>();
    r.truncated = j.at("truncated").get<bool>();
    r.seed = j.at("seed").get<uint64_t>();
    r.config_hash = j.value("config_hash", std::string{});
    return r;
}

void write_cmc_csv(const EvalReport& r, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write CMC csv: " + file.string());
    out.precision(17);
    if (!r.config_hash.empty()) out << "# config_hash " << r.config_hash << "\n";
    out << "rank,match_rate\n";
    for (size_t i = 0; i < r.cmc.size(); ++i) out << (i + 1) << "," << r.cmc[i] << "\n";
}

void write_pr_csv(const std::vector<std::vector<int>>& rankings,
                  const std::vector<std::vector<uint8_t>>& truth,
                  const std::filesystem::path& file) {
    if (rankings.size() != truth.size())
        throw std::invalid_argument("write_pr_csv: rankings/truth size mismatch");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write PR csv: " + file.string());
    out.precision(17);
    out << "probe,rank,precision,recall\n";
    for (size_t p = 0; p < rankings.size(); ++p) {
        size_t total = 0;
        for (uint8_t m : truth[p])
            if (m) ++total;
        size_t found = 0;
        for (size_t r = 0; r < rankings[p].size(); ++r) {
            if (truth[p][rankings[p][r]]) ++found;
            double precision = static_cast<double>(found) / static_cast<double>(r + 1);
            double recall = total ? static_cast<double>(found) / static_cast<double>(total) : 0.0;
            out << p << "," << (r + 1) << "," << precision << "," << recall << "\n";
        }
    }
}

}  // namespace csri::eval
