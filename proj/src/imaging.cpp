#include "memnet/imaging.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace memnet {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// -----------------------------------------------------------------------------
// PBM
// -----------------------------------------------------------------------------

Bitmap parse_pbm(const std::string& text, const std::string& name) {
    // Tokenize, dropping '#' comments.
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else {
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
                   text[j] != '#')
                ++j;
            tokens.emplace_back(text.substr(i, j - i));
            i = j;
        }
    }
    if (tokens.empty() || tokens[0] != "P1")
        throw FormatError(FormatError::Kind::Parse, name + ": not a P1 portable bitmap");
    if (tokens.size() < 3)
        throw FormatError(FormatError::Kind::Parse, name + ": missing dimensions");
    int w = 0, h = 0;
    try {
        w = std::stoi(tokens[1]);
        h = std::stoi(tokens[2]);
    } catch (const std::exception&) {
        throw FormatError(FormatError::Kind::Parse, name + ": bad dimension tokens");
    }
    if (w <= 0 || h <= 0)
        throw FormatError(FormatError::Kind::Parse, name + ": nonpositive dimensions");

    Bitmap bmp(w, h);
    std::size_t need = static_cast<std::size_t>(w) * h;
    std::size_t got = 0;
    for (std::size_t t = 3; t < tokens.size(); ++t) {
        // P1 allows digits to be run together with or without whitespace.
        for (char c : tokens[t]) {
            if (c != '0' && c != '1')
                throw FormatError(FormatError::Kind::Parse,
                                  name + ": pixel token is not 0/1");
            if (got >= need)
                throw FormatError(FormatError::Kind::Parse, name + ": too many pixels");
            bmp.pixels[got++] = static_cast<std::uint8_t>(c - '0');
        }
    }
    if (got != need)
        throw FormatError(FormatError::Kind::Parse,
                          name + ": expected " + std::to_string(need) + " pixels, got " +
                              std::to_string(got));
    return bmp;
}

Bitmap load_pbm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pbm(buf.str(), path);
}

std::string to_pbm(const Bitmap& bmp) {
    std::ostringstream os;
    os << "P1\n" << bmp.width << " " << bmp.height << "\n";
    for (int y = 0; y < bmp.height; ++y) {
        for (int x = 0; x < bmp.width; ++x) {
            if (x) os << ' ';
            os << static_cast<int>(bmp.at(x, y));
        }
        os << '\n';
    }
    return os.str();
}

std::vector<std::uint8_t> bitmap_to_inputs(const Bitmap& bmp) {
    return bmp.pixels;
}

// -----------------------------------------------------------------------------
// Deformations
// -----------------------------------------------------------------------------

void DeformationDistribution::validate() const {
    if (sigma_noise < 0 || sigma_rot_deg < 0 || sigma_scale < 0 || sigma_shift_px < 0)
        throw ConfigError("deformation distribution: sigmas must be nonnegative");
    if (max_shift_px && *max_shift_px < 0)
        throw ConfigError("deformation distribution: max_shift_px must be nonnegative");
}

namespace {

double draw_field(double sigma, SampleMode mode, Rng& rng) {
    if (sigma <= 0) return 0.0;
    if (mode == SampleMode::UniformRange) {
        std::uniform_real_distribution<double> u(-sigma, sigma);
        return u(rng);
    }
    std::normal_distribution<double> n(0.0, sigma);
    double x;
    do {
        x = n(rng);
    } while (std::abs(x) > 3.0 * sigma);
    return x;
}

}  // namespace

DeformationParams sample_params(const DeformationDistribution& dist, Rng& rng) {
    dist.validate();
    DeformationParams p;
    double noise = draw_field(dist.sigma_noise, dist.mode, rng);
    p.noise_p = std::min(std::abs(noise), 1.0);
    p.rotation_deg = draw_field(dist.sigma_rot_deg, dist.mode, rng);
    p.scale = 1.0 + draw_field(dist.sigma_scale, dist.mode, rng);
    double sx = draw_field(dist.sigma_shift_px, dist.mode, rng);
    double sy = draw_field(dist.sigma_shift_px, dist.mode, rng);
    if (dist.max_shift_px) {
        double m = *dist.max_shift_px;
        sx = std::clamp(sx, -m, m);
        sy = std::clamp(sy, -m, m);
    }
    p.shift_x = static_cast<int>(std::lround(sx));
    p.shift_y = static_cast<int>(std::lround(sy));
    return p;
}

Bitmap apply_salt_pepper(const Bitmap& bmp, double p, Rng& rng) {
    if (p < 0 || p > 1) throw ContractError("apply_salt_pepper: p outside [0,1]");
    if (p == 0) return bmp;
    Bitmap out = bmp;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& px : out.pixels) {
        if (u(rng) < p) px = u(rng) < 0.5 ? 0 : 1;
    }
    return out;
}

Bitmap rotate(const Bitmap& bmp, double degrees) {
    if (!std::isfinite(degrees)) throw ContractError("rotate: angle must be finite");
    if (degrees == 0.0) return bmp;
    Bitmap out(bmp.width, bmp.height);
    double cx = (bmp.width - 1) / 2.0;
    double cy = (bmp.height - 1) / 2.0;
    double rad = degrees * kPi / 180.0;
    // Content rotates clockwise (y grows downward); inverse map rotates the
    // output coordinate counterclockwise.
    double c = std::cos(rad), s = std::sin(rad);
    for (int y = 0; y < bmp.height; ++y) {
        for (int x = 0; x < bmp.width; ++x) {
            double dx = x - cx, dy = y - cy;
            double sx = c * dx + s * dy + cx;
            double sy = -s * dx + c * dy + cy;
            int ix = static_cast<int>(std::lround(sx));
            int iy = static_cast<int>(std::lround(sy));
            if (ix >= 0 && ix < bmp.width && iy >= 0 && iy < bmp.height)
                out.set(x, y, bmp.at(ix, iy));
        }
    }
    return out;
}

Bitmap scale(const Bitmap& bmp, double factor) {
    if (!(factor > 0) || !std::isfinite(factor))
        throw ContractError("scale: factor must be positive and finite");
    if (factor == 1.0) return bmp;
    Bitmap out(bmp.width, bmp.height);
    double cx = (bmp.width - 1) / 2.0;
    double cy = (bmp.height - 1) / 2.0;
    for (int y = 0; y < bmp.height; ++y) {
        for (int x = 0; x < bmp.width; ++x) {
            double sx = (x - cx) / factor + cx;
            double sy = (y - cy) / factor + cy;
            int ix = static_cast<int>(std::lround(sx));
            int iy = static_cast<int>(std::lround(sy));
            if (ix >= 0 && ix < bmp.width && iy >= 0 && iy < bmp.height)
                out.set(x, y, bmp.at(ix, iy));
        }
    }
    return out;
}

Bitmap shift(const Bitmap& bmp, int dx, int dy) {
    if (dx == 0 && dy == 0) return bmp;
    Bitmap out(bmp.width, bmp.height);
    for (int y = 0; y < bmp.height; ++y) {
        int sy = y - dy;
        if (sy < 0 || sy >= bmp.height) continue;
        for (int x = 0; x < bmp.width; ++x) {
            int sx = x - dx;
            if (sx >= 0 && sx < bmp.width) out.set(x, y, bmp.at(sx, sy));
        }
    }
    return out;
}

Bitmap deform(const Bitmap& bmp, const DeformationParams& params, Rng& rng) {
    Bitmap out = scale(bmp, params.scale);
    out = rotate(out, params.rotation_deg);
    out = shift(out, params.shift_x, params.shift_y);
    out = apply_salt_pepper(out, params.noise_p, rng);
    return out;
}

// -----------------------------------------------------------------------------
// Glyph sets
// -----------------------------------------------------------------------------

GlyphSet load_glyphs(const std::string& source) {
    if (source == "builtin") return builtin_glyphs();

    namespace fs = std::filesystem;
    if (!fs::is_directory(source)) throw IoError("glyph source is not a directory: " + source);
    GlyphSet set;
    set.provenance = source;
    for (int g = 0; g < kNumGlyphs; ++g) {
        std::string name(1, static_cast<char>('A' + g));
        fs::path p = fs::path(source) / (name + ".pbm");
        if (!fs::exists(p))
            throw FormatError(FormatError::Kind::MissingEntry, "missing glyph " + name);
        Bitmap bmp = load_pbm(p.string());
        if (bmp.width != kGlyphDim || bmp.height != kGlyphDim)
            throw FormatError(FormatError::Kind::Dimension,
                              p.string() + ": expected " + std::to_string(kGlyphDim) + "x" +
                                  std::to_string(kGlyphDim) + ", got " +
                                  std::to_string(bmp.width) + "x" + std::to_string(bmp.height));
        set.glyphs[g] = std::move(bmp);
    }
    return set;
}

}  // namespace memnet
