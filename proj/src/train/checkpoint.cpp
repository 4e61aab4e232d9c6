#include "csri/train/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace csri::train {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payloads are little-endian floats");

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

void write_block(std::ofstream& out, const std::string& name, const std::vector<int>& shape,
                 const nn::Vec& values) {
    std::vector<float> payload(values.size());
    for (long i = 0; i < values.size(); ++i) payload[i] = static_cast<float>(values[i]);
    out << "block " << name << " " << shape.size();
    for (int d : shape) out << " " << d;
    out << " " << payload.size() * sizeof(float) << "\n";
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(float)));
    out << "\n";
}

struct BlockHeader {
    std::string name;
    std::vector<int> shape;
    size_t nbytes = 0;
};

// Returns false at the "end" marker.
bool read_block_header(std::istream& in, const std::string& fname, BlockHeader& hdr) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(fname + ": missing end marker");
    if (line == "end") return false;
    std::istringstream ls(line);
    std::string kw;
    size_t rank;
    if (!(ls >> kw >> hdr.name >> rank) || kw != "block")
        throw std::runtime_error(fname + ": malformed block header '" + line + "'");
    hdr.shape.resize(rank);
    for (size_t i = 0; i < rank; ++i)
        if (!(ls >> hdr.shape[i])) throw std::runtime_error(fname + ": malformed block shape");
    if (!(ls >> hdr.nbytes)) throw std::runtime_error(fname + ": malformed block size");
    return true;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& file, CsriModel& model,
                     const CheckpointMeta& meta) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + file.string());

    const auto& fcfg = model.fr().config();
    out << "csri-checkpoint v1\n";
    out << "variant " << meta.variant << "\n";
    out << "config_hash " << (meta.config_hash.empty() ? "-" : meta.config_hash) << "\n";
    out << "seed " << meta.seed << "\n";
    out << "step " << meta.step << "\n";
    out << "lambda_sr " << meta.lambda_sr << "\n";
    out << "has_sr " << (model.has_sr() ? 1 : 0) << "\n";
    if (model.has_sr()) {
        const auto& scfg = model.sr().config();
        out << "sr_depth " << scfg.depth << "\n";
        out << "sr_channels " << scfg.channels << "\n";
        out << "sr_kernel " << scfg.kernel << "\n";
        out << "sr_residual " << (scfg.residual ? 1 : 0) << "\n";
    }
    out << "in_channels " << fcfg.in_channels << "\n";
    out << "fr_input " << fcfg.input_size << "\n";
    out << "fr_kernel " << fcfg.kernel << "\n";
    out << "trunk_channels " << join_ints(fcfg.trunk_channels) << "\n";
    out << "embedding_dim " << fcfg.embedding_dim << "\n";
    out << "syn_classes " << fcfg.syn_classes << "\n";
    out << "nat_classes " << fcfg.nat_classes << "\n";

    auto params = model.params_all();
    out << "blocks " << 2 * params.size() << "\n";
    for (const nn::Param* p : params) write_block(out, p->name, p->shape, p->value);
    for (const nn::Param* p : params) write_block(out, "opt." + p->name, p->shape, p->mom);
    out << "end\n";
    if (!out) throw std::runtime_error("short write: " + file.string());
}

CsriModel load_checkpoint(const std::filesystem::path& file, CheckpointMeta* meta_out) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + file.string());
    std::string fname = file.string();

    std::string line;
    if (!std::getline(in, line) || line != "csri-checkpoint v1")
        throw std::runtime_error(fname + ": not a csri checkpoint");

    CheckpointMeta meta;
    std::map<std::string, std::string> kv;
    size_t n_blocks = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "blocks") {
            if (!(ls >> n_blocks)) throw std::runtime_error(fname + ": bad blocks count");
            break;
        }
        std::string value;
        std::getline(ls, value);
        if (!value.empty() && value.front() == ' ') value.erase(0, 1);
        kv[key] = value;
    }

    auto get = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error(fname + ": missing header '" + key + "'");
        return it->second;
    };

    meta.variant = get("variant");
    meta.config_hash = get("config_hash");
    if (meta.config_hash == "-") meta.config_hash.clear();
    meta.seed = std::stoull(get("seed"));
    meta.step = std::stol(get("step"));
    meta.lambda_sr = std::stod(get("lambda_sr"));

    std::optional<sr::SRNetworkConfig> sr_cfg;
    fr::FRNetworkConfig fr_cfg;
    fr_cfg.in_channels = std::stoi(get("in_channels"));
    fr_cfg.input_size = std::stoi(get("fr_input"));
    fr_cfg.kernel = std::stoi(get("fr_kernel"));
    fr_cfg.trunk_channels = parse_int_list(get("trunk_channels"));
    fr_cfg.embedding_dim = std::stoi(get("embedding_dim"));
    fr_cfg.syn_classes = std::stoi(get("syn_classes"));
    fr_cfg.nat_classes = std::stoi(get("nat_classes"));
    if (std::stoi(get("has_sr")) != 0) {
        sr::SRNetworkConfig s;
        s.depth = std::stoi(get("sr_depth"));
        s.channels = std::stoi(get("sr_channels"));
        s.kernel = std::stoi(get("sr_kernel"));
        s.residual = std::stoi(get("sr_residual")) != 0;
        s.in_channels = fr_cfg.in_channels;
        sr_cfg = s;
    }

    CsriModel model(sr_cfg, fr_cfg);
    std::map<std::string, nn::Param*> by_name;
    for (nn::Param* p : model.params_all()) by_name[p->name] = p;

    size_t seen = 0;
    BlockHeader hdr;
    while (read_block_header(in, fname, hdr)) {
        ++seen;
        bool is_mom = hdr.name.rfind("opt.", 0) == 0;
        std::string pname = is_mom ? hdr.name.substr(4) : hdr.name;
        auto it = by_name.find(pname);
        if (it == by_name.end())
            throw std::runtime_error(fname + ": unknown parameter block '" + hdr.name + "'");
        nn::Param* p = it->second;
        if (hdr.nbytes != static_cast<size_t>(p->size()) * sizeof(float))
            throw std::runtime_error(fname + ": block '" + hdr.name + "' has wrong payload size");
        std::vector<float> payload(p->size());
        in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(hdr.nbytes));
        if (static_cast<size_t>(in.gcount()) != hdr.nbytes)
            throw std::runtime_error(fname + ": truncated block '" + hdr.name + "'");
        in.get();  // separator newline
        nn::Vec& dst = is_mom ? p->mom : p->value;
        for (long i = 0; i < p->size(); ++i) dst[i] = payload[i];
    }
    if (seen != n_blocks)
        throw std::runtime_error(fname + ": expected " + std::to_string(n_blocks) +
                                 " blocks, found " + std::to_string(seen));

    if (meta_out) *meta_out = meta;
    return model;
}

std::vector<std::string> checkpoint_block_names(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + file.string());
    std::string fname = file.string();
    std::string line;
    std::getline(in, line);
    size_t n_blocks = 0;
    while (std::getline(in, line)) {
        if (line.rfind("blocks ", 0) == 0) {
            n_blocks = std::stoul(line.substr(7));
            break;
        }
    }
    std::vector<std::string> names;
    BlockHeader hdr;
    while (names.size() < n_blocks && read_block_header(in, fname, hdr)) {
        if (hdr.name.rfind("opt.", 0) != 0) names.push_back(hdr.name);
        in.seekg(static_cast<std::streamoff>(hdr.nbytes + 1), std::ios::cur);
    }
    return names;
}

}  // namespace csri::train
