#include "csri/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "csri/rng.hpp"

namespace csri::cli {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error("config: bad boolean '" + v + "' for " + where);
}

std::vector<int> parse_int_list(const std::string& v, const std::string& where) {
    std::vector<int> out;
    std::istringstream in(v);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw std::runtime_error("config: bad integer '" + tok + "' in " + where);
        }
    }
    if (out.empty()) throw std::runtime_error("config: empty list for " + where);
    return out;
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string join_list(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace

uint64_t split_seed(const ExperimentConfig& cfg) { return mix_seed(cfg.seed, 0x5317); }
uint64_t degrade_seed(const ExperimentConfig& cfg) { return mix_seed(cfg.seed, 0xDE64); }
uint64_t train_seed(const ExperimentConfig& cfg) { return mix_seed(cfg.seed, 0x7217); }

std::string canonical_config_text(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "[paths]\n";
    os << "corpus = " << cfg.corpus_root.generic_string() << "\n";
    os << "workspace = " << cfg.workspace.generic_string() << "\n";
    os << "\n[degradation]\n";
    os << "lr_height = " << cfg.degrade.lr_height << "\n";
    os << "lr_width = " << cfg.degrade.lr_width << "\n";
    os << "blur_sigma = " << fmt_double(cfg.degrade.blur_sigma) << "\n";
    os << "noise_sigma = " << fmt_double(cfg.degrade.noise_sigma) << "\n";
    os << "\n[sr]\n";
    os << "depth = " << cfg.sr.depth << "\n";
    os << "channels = " << cfg.sr.channels << "\n";
    os << "kernel = " << cfg.sr.kernel << "\n";
    os << "residual = " << (cfg.sr.residual ? "true" : "false") << "\n";
    os << "\n[fr]\n";
    os << "input_size = " << cfg.fr_input_size << "\n";
    os << "kernel = " << cfg.fr_kernel << "\n";
    os << "trunk_channels = " << join_list(cfg.trunk_channels) << "\n";
    os << "embedding_dim = " << cfg.embedding_dim << "\n";
    os << "\n[train]\n";
    os << "lambda_sr = " << fmt_double(cfg.train.weights.lambda_sr) << "\n";
    os << "learning_rate = " << fmt_double(cfg.train.sgd.learning_rate) << "\n";
    os << "momentum = " << fmt_double(cfg.train.sgd.momentum) << "\n";
    os << "weight_decay = " << fmt_double(cfg.train.sgd.weight_decay) << "\n";
    os << "grad_clip_norm = " << fmt_double(cfg.train.grad_clip_norm) << "\n";
    os << "lr_decay_steps = " << cfg.train.lr_decay_steps << "\n";
    os << "lr_decay_factor = " << fmt_double(cfg.train.lr_decay_factor) << "\n";
    os << "batch_aux = " << cfg.train.batch_aux << "\n";
    os << "batch_nat = " << cfg.train.batch_nat << "\n";
    os << "stage1_steps = " << cfg.train.stage1_steps << "\n";
    os << "stage2_steps = " << cfg.train.stage2_steps << "\n";
    os << "center_loss = " << (cfg.train.center_loss_enabled ? "true" : "false") << "\n";
    os << "center_lambda = " << fmt_double(cfg.train.center_lambda) << "\n";
    os << "center_alpha = " << fmt_double(cfg.train.center_alpha) << "\n";
    os << "\n[eval]\n";
    os << "k = " << cfg.eval_k << "\n";
    os << "\n[experiment]\n";
    os << "seed = " << cfg.seed << "\n";
    std::string vs;
    for (size_t i = 0; i < cfg.variants.size(); ++i) {
        if (i) vs += ",";
        vs += train::to_string(cfg.variants[i]);
    }
    os << "variants = " << vs << "\n";
    return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
    // the hash identifies the experiment definition, not its location on disk
    ExperimentConfig c = cfg;
    c.corpus_root.clear();
    c.workspace.clear();
    uint64_t h = fnv1a64(canonical_config_text(c));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_config(const ExperimentConfig& cfg, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write config: " + file.string());
    out << canonical_config_text(cfg);
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config: " + file.string());

    ExperimentConfig cfg;
    std::string section, line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                         ": malformed section header");
            section = line.substr(1, line.size() - 2);
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::string where = section + "." + key;

        auto to_int = [&](int& dst) {
            try {
                dst = std::stoi(value);
            } catch (const std::exception&) {
                throw std::runtime_error("config: bad integer '" + value + "' for " + where);
            }
        };
        auto to_double = [&](double& dst) {
            try {
                dst = std::stod(value);
            } catch (const std::exception&) {
                throw std::runtime_error("config: bad number '" + value + "' for " + where);
            }
        };

        bool known = true;
        if (section == "paths") {
            if (key == "corpus") cfg.corpus_root = value;
            else if (key == "workspace") cfg.workspace = value;
            else known = false;
        } else if (section == "degradation") {
            if (key == "lr_height") to_int(cfg.degrade.lr_height);
            else if (key == "lr_width") to_int(cfg.degrade.lr_width);
            else if (key == "blur_sigma") to_double(cfg.degrade.blur_sigma);
            else if (key == "noise_sigma") to_double(cfg.degrade.noise_sigma);
            else known = false;
        } else if (section == "sr") {
            if (key == "depth") to_int(cfg.sr.depth);
            else if (key == "channels") to_int(cfg.sr.channels);
            else if (key == "kernel") to_int(cfg.sr.kernel);
            else if (key == "residual") cfg.sr.residual = parse_bool(value, where);
            else known = false;
        } else if (section == "fr") {
            if (key == "input_size") to_int(cfg.fr_input_size);
            else if (key == "kernel") to_int(cfg.fr_kernel);
            else if (key == "trunk_channels") cfg.trunk_channels = parse_int_list(value, where);
            else if (key == "embedding_dim") to_int(cfg.embedding_dim);
            else known = false;
        } else if (section == "train") {
            if (key == "lambda_sr") to_double(cfg.train.weights.lambda_sr);
            else if (key == "learning_rate") to_double(cfg.train.sgd.learning_rate);
            else if (key == "momentum") to_double(cfg.train.sgd.momentum);
            else if (key == "weight_decay") to_double(cfg.train.sgd.weight_decay);
            else if (key == "lr_decay_steps") to_int(cfg.train.lr_decay_steps);
            else if (key == "lr_decay_factor") to_double(cfg.train.lr_decay_factor);
            else if (key == "batch_aux") to_int(cfg.train.batch_aux);
            else if (key == "batch_nat") to_int(cfg.train.batch_nat);
            else if (key == "stage1_steps") to_int(cfg.train.stage1_steps);
            else if (key == "stage2_steps") to_int(cfg.train.stage2_steps);
            else if (key == "center_loss") cfg.train.center_loss_enabled = parse_bool(value, where);
            else if (key == "center_lambda") to_double(cfg.train.center_lambda);
            else if (key == "center_alpha") to_double(cfg.train.center_alpha);
            else known = false;
        } else if (section == "eval") {
            if (key == "k") to_int(cfg.eval_k);
            else known = false;
        } else if (section == "experiment") {
            if (key == "seed") {
                try {
                    cfg.seed = std::stoull(value);
                } catch (const std::exception&) {
                    throw std::runtime_error("config: bad seed '" + value + "'");
                }
            } else if (key == "variants") {
                cfg.variants.clear();
                std::istringstream vs(value);
                std::string tok;
                while (std::getline(vs, tok, ','))
                    cfg.variants.push_back(train::variant_from_string(trim(tok)));
            } else known = false;
        } else {
            throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                     ": unknown section [" + section + "]");
        }
        if (!known)
            throw std::runtime_error(file.string() + ":" + std::to_string(lineno) +
                                     ": unknown key '" + where + "'");
    }

    cfg.sr.in_channels = 1;
    cfg.train.seed = train_seed(cfg);
    return cfg;
}

std::filesystem::path manifests_dir(const ExperimentConfig& cfg) { return cfg.workspace / "manifests"; }
std::filesystem::path images_dir(const ExperimentConfig& cfg) { return cfg.workspace / "images"; }
std::filesystem::path checkpoints_dir(const ExperimentConfig& cfg) { return cfg.workspace / "checkpoints"; }
std::filesystem::path logs_dir(const ExperimentConfig& cfg) { return cfg.workspace / "logs"; }
std::filesystem::path reports_dir(const ExperimentConfig& cfg) { return cfg.workspace / "reports"; }

}  // namespace csri::cli
