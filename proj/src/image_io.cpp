#include "csri/image_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace csri {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            while ((c = in.peek()) != EOF && !std::isspace(c)) {
                tok.push_back(static_cast<char>(in.get()));
            }
            return tok;
        }
    }
    return tok;
}

int parse_int(std::istream& in, const std::string& file, const char* what) {
    std::string tok = next_token(in);
    if (tok.empty()) throw std::runtime_error(file + ": truncated header, missing " + what);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw std::runtime_error(file + ": bad " + std::string(what) + " '" + tok + "'");
    }
}

}  // namespace

Tensor read_image(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image: " + file.string());
    std::string fname = file.string();

    std::string magic = next_token(in);
    bool ascii;
    int channels;
    if (magic == "P5") { ascii = false; channels = 1; }
    else if (magic == "P2") { ascii = true; channels = 1; }
    else if (magic == "P6") { ascii = false; channels = 3; }
    else if (magic == "P3") { ascii = true; channels = 3; }
    else throw std::runtime_error(fname + ": unsupported format '" + magic + "' (want PGM/PPM)");

    int w = parse_int(in, fname, "width");
    int h = parse_int(in, fname, "height");
    int maxval = parse_int(in, fname, "maxval");
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw std::runtime_error(fname + ": bad dimensions/maxval");

    Tensor img(channels, h, w);
    const double scale = 1.0 / maxval;
    size_t n = static_cast<size_t>(w) * h * channels;

    if (ascii) {
        for (size_t i = 0; i < n; ++i) {
            int val = parse_int(in, fname, "sample");
            int c = static_cast<int>(i % channels);
            size_t pix = i / channels;
            img.plane(c)[pix] = val * scale;
        }
    } else {
        in.get();  // single whitespace after maxval
        int bytes_per = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> raw(n * bytes_per);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<size_t>(in.gcount()) != raw.size())
            throw std::runtime_error(fname + ": truncated pixel data");
        for (size_t i = 0; i < n; ++i) {
            int val;
            if (bytes_per == 2)
                val = (raw[2 * i] << 8) | raw[2 * i + 1];  // big-endian per PNM spec
            else
                val = raw[i];
            int c = static_cast<int>(i % channels);
            size_t pix = i / channels;
            img.plane(c)[pix] = val * scale;
        }
    }
    return img;
}

void write_image(const std::filesystem::path& file, const Tensor& img) {
    if (img.ch != 1 && img.ch != 3)
        throw std::invalid_argument("write_image: tensor must have 1 or 3 channels, got " +
                                    img.shape_str());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + file.string());

    out << (img.ch == 1 ? "P5" : "P6") << "\n" << img.w << " " << img.h << "\n255\n";
    std::vector<unsigned char> raw(static_cast<size_t>(img.w) * img.h * img.ch);
    size_t k = 0;
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            for (int c = 0; c < img.ch; ++c) {
                double v = img.at(c, y, x);
                v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
                raw[k++] = static_cast<unsigned char>(std::lround(v * 255.0));
            }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw std::runtime_error("short write: " + file.string());
}

}  // namespace csri
