#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "memnet/circuit.hpp"
#include "memnet/imaging.hpp"
#include "memnet/input_map.hpp"

namespace memnet {

using Code = std::vector<std::uint8_t>;

int hamming(const Code& a, const Code& b);

std::string code_to_string(const Code& c);
Code code_from_string(const std::string& s);

// Main codes are defined operationally: the noise-free forward outputs of the
// current network, one per character. They are recomputed whenever the
// genome changes.
struct Codebook {
    std::vector<Code> main_codes;  // index 0 = 'A'

    int n_codes() const { return static_cast<int>(main_codes.size()); }
    int code_len() const { return main_codes.empty() ? 0 : static_cast<int>(main_codes[0].size()); }

    // The character's main code plus its one-bit neighbors (N_o + 1 codes).
    std::vector<Code> code_set(int character) const;

    bool all_unique() const;

    // One line per character: "A 010110100011".
    std::string to_text() const;
    static Codebook from_text(const std::string& text);
};

Codebook extract_main_codes(const Network& net, const GlyphSet& glyphs,
                            const InputMap& map);

// Minimum Hamming distance over all unordered pairs of main codes.
int min_pairwise_distance(const Codebook& cb);

// Nearest-main-code decode with radius 1: returns the unique character whose
// main code is within distance <= 1 of `observed`, or nullopt (reject).
// Requires min spacing >= 3; anything less makes radius-1 balls overlap, so
// decode refuses to run rather than guess.
std::optional<int> decode(const Codebook& cb, const Code& observed);

// Hamming distance between `observed` and the character's main code.
int bit_errors(const Codebook& cb, int character, const Code& observed);

}  // namespace memnet
