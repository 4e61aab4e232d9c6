#include "csri/data/manifest.hpp"

#include <fstream>
#include <sstream>

namespace csri::data {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void fail(const std::filesystem::path& file, size_t lineno, const std::string& msg) {
    throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": " + msg);
}

}  // namespace

void write_manifest(const SplitManifest& m, const std::filesystem::path& file) {
    validate(m);
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + file.string());

    RoleCounts c = m.counts();
    out << "# csri-manifest v1\n";
    out << "# dataset " << m.dataset << "\n";
    out << "# seed " << m.seed << "\n";
    if (!m.config_hash.empty()) out << "# config_hash " << m.config_hash << "\n";
    out << "# counts train=" << c.train << " probe=" << c.probe
        << " gallery_match=" << c.gallery_match << " gallery_distractor=" << c.gallery_distractor
        << "\n";
    for (const auto& r : m.records) {
        out << r.image_path << "\t";
        if (r.identity) out << *r.identity;
        out << "\t" << to_string(r.domain) << "\t" << to_string(r.role) << "\n";
    }
    if (!out) throw std::runtime_error("short write: " + file.string());
}

SplitManifest load_manifest(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest: " + file.string());

    SplitManifest m;
    bool have_counts = false;
    RoleCounts declared;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "dataset") {
                hs >> m.dataset;
            } else if (key == "seed") {
                if (!(hs >> m.seed)) fail(file, lineno, "bad seed header");
            } else if (key == "config_hash") {
                hs >> m.config_hash;
            } else if (key == "counts") {
                std::string kv;
                while (hs >> kv) {
                    size_t eq = kv.find('=');
                    if (eq == std::string::npos) fail(file, lineno, "bad counts entry '" + kv + "'");
                    size_t n;
                    try {
                        n = std::stoul(kv.substr(eq + 1));
                    } catch (const std::exception&) {
                        fail(file, lineno, "bad count in '" + kv + "'");
                    }
                    std::string role = kv.substr(0, eq);
                    if (role == "train") declared.train = n;
                    else if (role == "probe") declared.probe = n;
                    else if (role == "gallery_match") declared.gallery_match = n;
                    else if (role == "gallery_distractor") declared.gallery_distractor = n;
                    else fail(file, lineno, "unknown role in counts '" + role + "'");
                }
                have_counts = true;
            }
            continue;  // unknown headers tolerated
        }

        std::vector<std::string> f = split_tabs(line);
        if (f.size() != 4)
            fail(file, lineno, "expected 4 tab-separated fields, got " + std::to_string(f.size()));
        FaceRecord r;
        r.image_path = f[0];
        if (r.image_path.empty()) fail(file, lineno, "empty image path");
        if (!f[1].empty()) {
            try {
                r.identity = std::stoi(f[1]);
            } catch (const std::exception&) {
                fail(file, lineno, "bad label '" + f[1] + "'");
            }
        }
        try {
            r.domain = domain_from_string(f[2]);
            r.role = role_from_string(f[3]);
        } catch (const std::invalid_argument& e) {
            fail(file, lineno, e.what());
        }
        if (r.role == Role::gallery_distractor && r.identity)
            fail(file, lineno, "distractor record carries a label");
        if (r.role != Role::gallery_distractor && !r.identity)
            fail(file, lineno, "labelled role without a label");
        m.records.push_back(std::move(r));
    }

    if (have_counts && !(declared == m.counts()))
        throw std::runtime_error(file.string() + ": declared counts do not match records");
    validate(m);
    return m;
}

}  // namespace csri::data
