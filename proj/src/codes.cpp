#include "memnet/codes.hpp"

#include <sstream>

namespace memnet {

int hamming(const Code& a, const Code& b) {
    if (a.size() != b.size()) throw ContractError("hamming: code lengths differ");
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

std::string code_to_string(const Code& c) {
    std::string s(c.size(), '0');
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) s[i] = '1';
    return s;
}

Code code_from_string(const std::string& s) {
    Code c(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw FormatError(FormatError::Kind::Parse, "code string is not binary: " + s);
        c[i] = s[i] == '1';
    }
    return c;
}

std::vector<Code> Codebook::code_set(int character) const {
    if (character < 0 || character >= n_codes())
        throw ContractError("code_set: character out of range");
    std::vector<Code> set;
    const Code& main = main_codes[character];
    set.push_back(main);
    for (std::size_t b = 0; b < main.size(); ++b) {
        Code c = main;
        c[b] ^= 1;
        set.push_back(c);
    }
    return set;
}

bool Codebook::all_unique() const {
    for (int i = 0; i < n_codes(); ++i)
        for (int j = i + 1; j < n_codes(); ++j)
            if (main_codes[i] == main_codes[j]) return false;
    return true;
}

std::string Codebook::to_text() const {
    std::ostringstream os;
    for (int i = 0; i < n_codes(); ++i)
        os << static_cast<char>('A' + i) << ' ' << code_to_string(main_codes[i]) << '\n';
    return os.str();
}

Codebook Codebook::from_text(const std::string& text) {
    Codebook cb;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string label, bits;
        if (!(ls >> label >> bits) || label.size() != 1)
            throw FormatError(FormatError::Kind::Parse, "bad codebook line: " + line);
        int idx = label[0] - 'A';
        if (idx != cb.n_codes())
            throw FormatError(FormatError::Kind::Parse,
                              "codebook lines out of order at: " + line);
        cb.main_codes.push_back(code_from_string(bits));
    }
    return cb;
}

Codebook extract_main_codes(const Network& net, const GlyphSet& glyphs,
                            const InputMap& map) {
    Codebook cb;
    cb.main_codes.reserve(kNumGlyphs);
    for (int g = 0; g < kNumGlyphs; ++g) {
        const Bitmap& bmp = glyphs.glyph(g);
        if (bmp.width * bmp.height != net.arch().n_inputs)
            throw ContractError("extract_main_codes: glyph size does not match n_inputs");
        cb.main_codes.push_back(net.forward(map.apply(bitmap_to_inputs(bmp))));
    }
    return cb;
}

int min_pairwise_distance(const Codebook& cb) {
    if (cb.n_codes() < 2)
        throw ContractError("min_pairwise_distance: need at least 2 codes");
    int best = cb.code_len();
    for (int i = 0; i < cb.n_codes(); ++i)
        for (int j = i + 1; j < cb.n_codes(); ++j)
            best = std::min(best, hamming(cb.main_codes[i], cb.main_codes[j]));
    return best;
}

std::optional<int> decode(const Codebook& cb, const Code& observed) {
    if (min_pairwise_distance(cb) < 3)
        throw ContractError("decode: codebook spacing < 3 makes radius-1 decode ambiguous");
    for (int i = 0; i < cb.n_codes(); ++i)
        if (hamming(cb.main_codes[i], observed) <= 1) return i;
    return std::nullopt;
}

int bit_errors(const Codebook& cb, int character, const Code& observed) {
    if (character < 0 || character >= cb.n_codes())
        throw ContractError("bit_errors: unknown character");
    return hamming(observed, cb.main_codes[character]);
}

}  // namespace memnet
