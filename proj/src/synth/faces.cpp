#include "csri/synth/faces.hpp"

#include <cmath>

#include "csri/image_io.hpp"
#include "csri/rng.hpp"

namespace csri::synth {

namespace {

struct IdentityParams {
    double face_rx, face_ry;   // head half-axes, fraction of half-size
    double skin, background;
    double hair_shade, hair_drop;  // hair band darkness and how far it reaches
    double eye_dx, eye_dy, eye_r, eye_shade;
    double brow_dy, brow_len, brow_th, brow_angle, brow_shade;
    double nose_len, nose_w, nose_shade;
    double mouth_dy, mouth_hw, mouth_th, mouth_shade;
};

IdentityParams sample_identity(uint64_t seed) {
    Rng r(seed);
    IdentityParams p;
    p.face_rx = r.uniform(0.52, 0.74);
    p.face_ry = r.uniform(0.66, 0.90);
    p.skin = r.uniform(0.55, 0.85);
    p.background = r.uniform(0.06, 0.34);
    p.hair_shade = r.uniform(0.04, 0.42);
    p.hair_drop = r.uniform(0.30, 0.55);       // of face_ry, from the top
    p.eye_dx = r.uniform(0.30, 0.52);          // of face_rx
    p.eye_dy = r.uniform(0.18, 0.36);          // of face_ry above centre
    p.eye_r = r.uniform(0.055, 0.105);
    p.eye_shade = r.uniform(0.02, 0.25);
    p.brow_dy = r.uniform(0.10, 0.20);         // above eyes, of face_ry
    p.brow_len = r.uniform(0.12, 0.22);
    p.brow_th = r.uniform(0.015, 0.045);
    p.brow_angle = r.uniform(-0.35, 0.35);
    p.brow_shade = r.uniform(0.05, 0.35);
    p.nose_len = r.uniform(0.16, 0.34);        // of face_ry below centre
    p.nose_w = r.uniform(0.018, 0.050);
    p.nose_shade = p.skin * r.uniform(0.70, 0.88);
    p.mouth_dy = r.uniform(0.42, 0.62);        // of face_ry below centre
    p.mouth_hw = r.uniform(0.26, 0.55);        // of face_rx
    p.mouth_th = r.uniform(0.025, 0.060);
    p.mouth_shade = r.uniform(0.10, 0.45);
    return p;
}

struct InstanceParams {
    double tx, ty, scale, yaw;
    double brightness, contrast;
    double grad_x, grad_y;
};

InstanceParams sample_instance(uint64_t seed) {
    Rng r(seed);
    InstanceParams q;
    q.tx = r.uniform(-0.08, 0.08);
    q.ty = r.uniform(-0.08, 0.08);
    q.scale = r.uniform(0.90, 1.10);
    q.yaw = r.uniform(-0.10, 0.10);  // horizontal feature shift, of face_rx
    q.brightness = r.uniform(-0.06, 0.06);
    q.contrast = r.uniform(0.92, 1.08);
    q.grad_x = r.uniform(-0.10, 0.10);
    q.grad_y = r.uniform(-0.10, 0.10);
    return q;
}

double smooth_edge(double signed_dist, double width) {
    double t = 0.5 - signed_dist / width;
    return t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
}

// signed distance to an axis-aligned ellipse boundary, approximated in pixels
double ellipse_sd(double x, double y, double rx, double ry) {
    double d = std::sqrt((x / rx) * (x / rx) + (y / ry) * (y / ry));
    return (d - 1.0) * std::min(rx, ry);
}

double bar_alpha(double x, double y, double cx, double cy, double hw, double hh, double angle,
                 double edge) {
    double ca = std::cos(angle), sa = std::sin(angle);
    double u = ca * (x - cx) + sa * (y - cy);
    double v = -sa * (x - cx) + ca * (y - cy);
    return smooth_edge(std::fabs(u) - hw, edge) * smooth_edge(std::fabs(v) - hh, edge);
}

// Scene intensity at a continuous point, coordinates in [-1,1] half-size units.
double scene(const IdentityParams& p, const InstanceParams& q, double nx, double ny, double hs) {
    double edge = 1.8 / hs;  // ~1.8 px soft edges

    // face-centred coordinates with instance translation/scale
    double x = (nx - q.tx) / q.scale;
    double y = (ny - q.ty) / q.scale;

    double value = p.background;

    // hair: a larger ellipse behind the head, visible above the drop line
    double hair_sd = ellipse_sd(x, y + 0.04, p.face_rx * 1.12, p.face_ry * 1.10);
    double hair_a = smooth_edge(hair_sd * hs, edge * hs);
    value += (p.hair_shade - value) * hair_a;

    double face_sd = ellipse_sd(x, y, p.face_rx, p.face_ry);
    double face_a = smooth_edge(face_sd * hs, edge * hs);
    value += (p.skin - value) * face_a;

    // hair covering the top of the head down to the drop line
    double drop_y = -p.face_ry * (1.0 - p.hair_drop);
    double band_a = smooth_edge((y - drop_y) * hs, edge * hs) * face_a;
    value += (p.hair_shade - value) * band_a;

    double fx = x - q.yaw * p.face_rx;  // features shift with yaw, head does not

    // brows
    double brow_y = -p.eye_dy * p.face_ry - p.brow_dy * p.face_ry;
    for (int s = -1; s <= 1; s += 2) {
        double a = bar_alpha(fx, y, s * p.eye_dx * p.face_rx, brow_y, p.brow_len, p.brow_th,
                             s * p.brow_angle, edge);
        value += (p.brow_shade - value) * a * face_a;
    }

    // eyes
    for (int s = -1; s <= 1; s += 2) {
        double ex = s * p.eye_dx * p.face_rx;
        double ey = -p.eye_dy * p.face_ry;
        double sd = ellipse_sd(fx - ex, y - ey, p.eye_r, p.eye_r * 0.78);
        double a = smooth_edge(sd * hs, edge * hs);
        value += (p.eye_shade - value) * a * face_a;
    }

    // nose
    double nose_a = bar_alpha(fx, y - p.nose_len * p.face_ry * 0.5, 0.0, 0.0, p.nose_w,
                              p.nose_len * p.face_ry * 0.5, 0.0, edge);
    value += (p.nose_shade - value) * nose_a * face_a;

    // mouth
    double mouth_a = bar_alpha(fx, y, 0.0, p.mouth_dy * p.face_ry, p.mouth_hw * p.face_rx,
                               p.mouth_th, 0.0, edge);
    value += (p.mouth_shade - value) * mouth_a * face_a;

    // illumination gradient + brightness/contrast
    value += q.grad_x * nx + q.grad_y * ny;
    value = (value - 0.5) * q.contrast + 0.5 + q.brightness;
    return value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
}

}  // namespace

Tensor render_face(int size, uint64_t identity_seed, uint64_t instance_seed) {
    if (size < 8) throw std::invalid_argument("render_face: size too small");
    IdentityParams p = sample_identity(identity_seed);
    InstanceParams q = sample_instance(instance_seed);

    Tensor img(1, size, size);
    double hs = size / 2.0;
    // 2x2 supersampling per pixel
    for (int yp = 0; yp < size; ++yp)
        for (int xp = 0; xp < size; ++xp) {
            double acc = 0.0;
            for (int sy = 0; sy < 2; ++sy)
                for (int sx = 0; sx < 2; ++sx) {
                    double nx = (xp + 0.25 + 0.5 * sx - hs) / hs;
                    double ny = (yp + 0.25 + 0.5 * sy - hs) / hs;
                    acc += scene(p, q, nx, ny, hs);
                }
            img.at(0, yp, xp) = acc / 4.0;
        }
    return img;
}

void generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
    if (spec.identities < 1 || spec.images_per_identity < 1)
        throw std::invalid_argument("generate_corpus: need identities and images per identity");
    if (spec.distractor_images < 0)
        throw std::invalid_argument("generate_corpus: negative distractor count");

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    char buf[64];
    for (int id = 0; id < spec.identities; ++id) {
        std::snprintf(buf, sizeof(buf), "id_%04d", id);
        fs::path dir = out_dir / buf;
        fs::create_directories(dir);
        uint64_t id_seed = mix_seed(spec.seed, 0xFACEull + id);
        for (int i = 0; i < spec.images_per_identity; ++i) {
            std::snprintf(buf, sizeof(buf), "img_%03d.pgm", i);
            Tensor img = render_face(spec.image_size, id_seed, mix_seed(id_seed, i));
            write_image(dir / buf, img);
        }
    }
    if (spec.distractor_images > 0) {
        fs::path dir = out_dir / "distractors";
        fs::create_directories(dir);
        for (int j = 0; j < spec.distractor_images; ++j) {
            uint64_t d_seed = mix_seed(spec.seed, 0xD157ull * 1000003ull + j);
            std::snprintf(buf, sizeof(buf), "d_%05d.pgm", j);
            Tensor img = render_face(spec.image_size, d_seed, mix_seed(d_seed, 1));
            write_image(dir / buf, img);
        }
    }
}

}  // namespace csri::synth
