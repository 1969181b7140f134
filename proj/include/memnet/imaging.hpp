#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memnet/errors.hpp"
#include "memnet/rng.hpp"

namespace memnet {

// =============================================================================
// Bitmaps
// =============================================================================

struct Bitmap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, 1 = ink

    Bitmap() = default;
    Bitmap(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, std::uint8_t v) {
        pixels[static_cast<std::size_t>(y) * width + x] = v;
    }
    bool operator==(const Bitmap&) const = default;
};

// Portable bitmap, text dialect: "P1", width height, then 0/1 tokens in
// row-major order. '#' starts a comment through end of line.
Bitmap parse_pbm(const std::string& text, const std::string& name);
Bitmap load_pbm(const std::string& path);
std::string to_pbm(const Bitmap& bmp);

// Row-major flattening, ink = 1.
std::vector<std::uint8_t> bitmap_to_inputs(const Bitmap& bmp);

// =============================================================================
// Deformations
// =============================================================================

struct DeformationParams {
    double noise_p = 0.0;       // per-pixel replacement probability
    double rotation_deg = 0.0;  // + = clockwise
    double scale = 1.0;
    int shift_x = 0;
    int shift_y = 0;

    bool is_identity() const {
        return noise_p == 0.0 && rotation_deg == 0.0 && scale == 1.0 && shift_x == 0 &&
               shift_y == 0;
    }
};

enum class SampleMode { TruncatedNormal, UniformRange };

// Deformation magnitudes. In TruncatedNormal mode each field is drawn from
// N(0, sigma^2) rejected outside [-3 sigma, 3 sigma]; in UniformRange mode the
// same numbers are read as hard bounds and draws are uniform over them.
// max_shift_px, when set, saturates sampled shifts so the glyph box stays on
// the canvas.
struct DeformationDistribution {
    double sigma_noise = 0.0;      // probability
    double sigma_rot_deg = 0.0;    // degrees
    double sigma_scale = 0.0;      // fraction; factor sampled as 1 + draw
    double sigma_shift_px = 0.0;   // pixels
    SampleMode mode = SampleMode::TruncatedNormal;
    std::optional<double> max_shift_px;

    void validate() const;
    bool is_identity() const {
        return sigma_noise == 0 && sigma_rot_deg == 0 && sigma_scale == 0 &&
               sigma_shift_px == 0;
    }
};

DeformationParams sample_params(const DeformationDistribution& dist, Rng& rng);

// Each pixel independently, with probability p, is replaced by a fair coin.
Bitmap apply_salt_pepper(const Bitmap& bmp, double p, Rng& rng);

// Inverse-mapped nearest-neighbor about the image center ((W-1)/2, (H-1)/2);
// source coordinates outside bounds read background 0.
Bitmap rotate(const Bitmap& bmp, double degrees);
Bitmap scale(const Bitmap& bmp, double factor);

// Output (x, y) = input (x - dx, y - dy); background 0 outside.
Bitmap shift(const Bitmap& bmp, int dx, int dy);

// Fixed composition order: scale, rotate, shift, then salt-and-pepper.
Bitmap deform(const Bitmap& bmp, const DeformationParams& params, Rng& rng);

// =============================================================================
// Glyphs
// =============================================================================

inline constexpr int kGlyphDim = 36;
inline constexpr int kNumGlyphs = 26;

struct GlyphSet {
    std::array<Bitmap, kNumGlyphs> glyphs;  // A..Z
    std::string provenance;

    const Bitmap& glyph(int index) const { return glyphs[index]; }
};

// `source` is either the built-in set id "builtin" or a directory holding
// A.pbm .. Z.pbm. Missing glyphs, wrong dimensions and parse failures raise
// distinct FormatError kinds.
GlyphSet load_glyphs(const std::string& source);

// The embedded block-letter set (constructed in glyph_data.cpp): 30x30
// letterforms centered in the 36x36 canvas, 3 px margin all around.
GlyphSet builtin_glyphs();

}  // namespace memnet
