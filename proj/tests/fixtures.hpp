#pragma once

// Shared handcrafted fixtures.
//
// spaced_codebook(): 26 twelve-bit codes with min pairwise distance exactly 3
// (4 data bits replicated into 3 nibbles; indices 16..25 complement the third
// nibble, which keeps cross-group distances >= 4).
//
// probe_fixture(): a 144-input, 12-output network whose rset is crafted so
// output bit k equals pixel 12k of the image: inside each tree one huge
// conductance per cell forwards a single chosen signal through two inverting
// stages while every other conductance is negligible. The glyph set carries
// the spaced codes at the probe pixels, so extract_main_codes reproduces them
// and the model is usable with the radius-1 decoder without any training.

#include <cstdint>

#include "memnet/codes.hpp"
#include "memnet/evolution.hpp"

namespace memnet_test {

inline memnet::Code spaced_code(int i) {
    memnet::Code c(12, 0);
    int data = i < 16 ? i : i - 16;
    for (int b = 0; b < 4; ++b) {
        std::uint8_t bit = static_cast<std::uint8_t>((data >> b) & 1);
        c[b] = bit;
        c[b + 4] = bit;
        c[b + 8] = i < 16 ? bit : bit ^ 1;
    }
    return c;
}

inline memnet::Codebook spaced_codebook() {
    memnet::Codebook cb;
    for (int i = 0; i < 26; ++i) cb.main_codes.push_back(spaced_code(i));
    return cb;
}

struct ProbeFixture {
    memnet::ArchitectureSpec arch;
    memnet::GlyphSet glyphs;
    memnet::TrainedModel model;
};

inline ProbeFixture probe_fixture() {
    using namespace memnet;
    ProbeFixture fx;
    fx.arch.n_inputs = 144;  // 12x12 images
    fx.arch.fan_ins = {4, 3};

    const double live = 1e-3, dead = 1e4, load = 1.0;
    std::vector<double> rset;
    // Layer 0: 36 cells of fan-in 4; cells 0,3,6,... forward their input 0
    // (global pixel 12k for tree k), the rest sit at constant output 1.
    for (int j = 0; j < 36; ++j) {
        rset.push_back(j % 3 == 0 ? live : dead);
        rset.push_back(dead);
        rset.push_back(dead);
        rset.push_back(dead);
        rset.push_back(load);
    }
    // Layer 1: 12 cells of fan-in 3, forwarding the live cell of their block.
    for (int k = 0; k < 12; ++k) {
        rset.push_back(live);
        rset.push_back(dead);
        rset.push_back(dead);
        rset.push_back(load);
    }

    fx.glyphs.provenance = "probe";
    Rng rng = make_stream(2024, "probe.fill");
    for (int g = 0; g < kNumGlyphs; ++g) {
        Bitmap b(12, 12);
        for (auto& p : b.pixels) p = static_cast<std::uint8_t>(rng() & 1);
        Code code = spaced_code(g);
        for (int k = 0; k < 12; ++k) b.pixels[12 * k] = code[k];
        fx.glyphs.glyphs[g] = std::move(b);
    }

    fx.model.arch = fx.arch;
    fx.model.rset = std::move(rset);
    fx.model.input_map = InputMapKind::RowMajor;
    fx.model.image_width = 12;
    fx.model.image_height = 12;
    fx.model.seed = 2024;
    fx.model.converged = true;
    Network net = fx.model.network();
    fx.model.codebook =
        extract_main_codes(net, fx.glyphs, InputMap::make(InputMapKind::RowMajor, fx.arch,
                                                          12, 12));
    return fx;
}

}  // namespace memnet_test
