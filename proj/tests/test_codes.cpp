#include <doctest.h>

#include "fixtures.hpp"
#include "memnet/codes.hpp"
#include "memnet/evolution.hpp"

using namespace memnet;
using memnet_test::spaced_codebook;

namespace {

Code bits(const char* s) { return code_from_string(s); }

}  // namespace

TEST_CASE("hamming basics") {
    CHECK(hamming(bits("000000000000"), bits("000000000000")) == 0);
    CHECK(hamming(bits("000000000000"), bits("111111111111")) == 12);
    CHECK(hamming(bits("000000000000"), bits("000000000111")) == 3);
    CHECK_THROWS_AS(hamming(bits("0101"), bits("01011")), ContractError);
}

TEST_CASE("hamming is a metric") {
    Rng rng = make_stream(21, "metric");
    auto rand_code = [&rng]() {
        Code c(12);
        for (auto& b : c) b = static_cast<std::uint8_t>(rng() & 1);
        return c;
    };
    for (int t = 0; t < 500; ++t) {
        Code a = rand_code(), b = rand_code(), c = rand_code();
        CHECK(hamming(a, b) == hamming(b, a));
        CHECK((hamming(a, b) == 0) == (a == b));
        CHECK(hamming(a, c) <= hamming(a, b) + hamming(b, c));
    }
}

TEST_CASE("min pairwise distance") {
    Codebook cb;
    cb.main_codes = {bits("000000000000"), bits("111111111111")};
    CHECK(min_pairwise_distance(cb) == 12);
    cb.main_codes.push_back(bits("000000000000"));
    CHECK(min_pairwise_distance(cb) == 0);
    Codebook one;
    one.main_codes = {bits("0101")};
    CHECK_THROWS_AS(min_pairwise_distance(one), ContractError);

    CHECK(min_pairwise_distance(spaced_codebook()) == 3);
}

TEST_CASE("code sets are the main code plus one-bit neighbors") {
    Codebook cb = spaced_codebook();
    auto set = cb.code_set(2);
    CHECK(set.size() == 13);
    CHECK(set[0] == cb.main_codes[2]);
    for (std::size_t i = 1; i < set.size(); ++i)
        CHECK(hamming(set[i], cb.main_codes[2]) == 1);
}

TEST_CASE("decode is radius-1 and rejects outside all balls") {
    Codebook cb = spaced_codebook();
    for (int c = 0; c < 26; ++c) {
        CHECK(decode(cb, cb.main_codes[c]) == c);
        for (int b = 0; b < 12; ++b) {
            Code flipped = cb.main_codes[c];
            flipped[b] ^= 1;
            auto got = decode(cb, flipped);
            // With spacing exactly 3 a one-bit neighbor may sit at distance 2
            // from another main code but never within 1 of it.
            CHECK(got == c);
        }
    }
    // A full sweep of all 2^12 codes: every decode is either within distance
    // 1 of the returned character or a reject at distance >= 2 from all.
    long accepted = 0;
    for (int v = 0; v < (1 << 12); ++v) {
        Code c(12);
        for (int b = 0; b < 12; ++b) c[b] = (v >> b) & 1;
        auto got = decode(cb, c);
        if (got) {
            ++accepted;
            CHECK(hamming(cb.main_codes[*got], c) <= 1);
        } else {
            for (int k = 0; k < 26; ++k) CHECK(hamming(cb.main_codes[k], c) >= 2);
        }
    }
    CHECK(accepted == 26 * 13);  // disjoint radius-1 balls

    Codebook tight;
    tight.main_codes = {bits("000000000000"), bits("110000000000")};
    CHECK_THROWS_AS(decode(tight, bits("000000000000")), ContractError);
}

TEST_CASE("bit_errors") {
    Codebook cb = spaced_codebook();
    CHECK(bit_errors(cb, 0, cb.main_codes[0]) == 0);
    Code comp = cb.main_codes[0];
    for (auto& b : comp) b ^= 1;
    CHECK(bit_errors(cb, 0, comp) == 12);
    CHECK_THROWS_AS(bit_errors(cb, 26, comp), ContractError);
}

TEST_CASE("extract_main_codes is deterministic and matches forward") {
    ArchitectureSpec arch;
    arch.n_inputs = 1296;
    arch.fan_ins = {6, 6, 3};
    Rng rng = make_stream(33, "extract");
    auto rset = random_rset(arch, ValueRange{}, rng);
    Network net = build_network(arch, rset);
    GlyphSet glyphs = builtin_glyphs();
    InputMap map = InputMap::make(InputMapKind::RowMajor, arch, kGlyphDim, kGlyphDim);

    Codebook cb1 = extract_main_codes(net, glyphs, map);
    Codebook cb2 = extract_main_codes(net, glyphs, map);
    CHECK(cb1.main_codes == cb2.main_codes);
    CHECK(cb1.n_codes() == 26);
    CHECK(cb1.code_len() == 12);
    CHECK(cb1.main_codes[0] == net.forward(map.apply(bitmap_to_inputs(glyphs.glyphs[0]))));
}

TEST_CASE("codebook text round trip") {
    Codebook cb = spaced_codebook();
    Codebook back = Codebook::from_text(cb.to_text());
    CHECK(back.main_codes == cb.main_codes);
    CHECK_THROWS_AS(Codebook::from_text("A 0101x1010101\n"), FormatError);
}

TEST_CASE("column-stride input map is a bijection grouped by tree columns") {
    ArchitectureSpec arch;
    arch.n_inputs = 1296;
    arch.fan_ins = {6, 6, 3};
    InputMap map = InputMap::make(InputMapKind::ColumnStride, arch, 36, 36);
    std::vector<int> seen(1296, 0);
    for (int line = 0; line < 1296; ++line) {
        int px = map.pixel_for_line(line);
        REQUIRE(px >= 0);
        REQUIRE(px < 1296);
        seen[px] += 1;
        // Tree k owns lines [108k, 108k+108); its pixels sit in columns
        // congruent to k mod 12.
        int tree = line / 108;
        CHECK(px % 36 % 12 == tree);
    }
    for (int s : seen) CHECK(s == 1);

    // Width not divisible by the output count is rejected.
    ArchitectureSpec odd;
    odd.n_inputs = 35 * 36;
    odd.fan_ins = {6, 6, 3};  // wrong divisibility
    CHECK_THROWS_AS(InputMap::make(InputMapKind::ColumnStride, odd, 35, 36), ConfigError);
}
