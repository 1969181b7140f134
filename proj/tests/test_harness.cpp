#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>

#include "fixtures.hpp"
#include "memnet/harness.hpp"

using namespace memnet;
using memnet_test::probe_fixture;
namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a64_ref(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

TEST_CASE("probe fixture wiring sanity") {
    auto fx = probe_fixture();
    CHECK(min_pairwise_distance(fx.model.codebook) == 3);
    CHECK(fx.model.codebook.all_unique());
    // Output bit k literally reads pixel 12k.
    Network net = fx.model.network();
    Rng rng = make_stream(3, "probe.sanity");
    for (int t = 0; t < 20; ++t) {
        std::vector<std::uint8_t> px(144);
        for (auto& p : px) p = static_cast<std::uint8_t>(rng() & 1);
        auto out = net.forward(px);
        for (int k = 0; k < 12; ++k) CHECK(out[k] == px[12 * k]);
    }
}

TEST_CASE("evaluate: identity protocol is perfect and deterministic") {
    auto fx = probe_fixture();
    TestProtocol protocol;  // all sigmas zero
    protocol.n_sets = 10;

    EvalReport rep = evaluate(fx.model, fx.glyphs, protocol, 42);
    CHECK(rep.accuracy == 1.0);
    CHECK(rep.abe == 0.0);
    CHECK(rep.max_bit_error == 0);
    CHECK(rep.rejects == 0);
    CHECK(rep.total == 260);

    EvalReport again = evaluate(fx.model, fx.glyphs, protocol, 42, 4);
    CHECK(again.accuracy == rep.accuracy);
    CHECK(again.abe == rep.abe);
    CHECK(again.confusion == rep.confusion);

    EvalReport other = evaluate(fx.model, fx.glyphs, protocol, 43);
    CHECK(other.accuracy == 1.0);  // identity protocol is seed-independent
}

TEST_CASE("evaluate rejects ambiguous codebooks") {
    auto fx = probe_fixture();
    fx.model.codebook.main_codes[1] = fx.model.codebook.main_codes[0];
    TestProtocol protocol;
    CHECK_THROWS_AS(evaluate(fx.model, fx.glyphs, protocol, 1), ContractError);
}

TEST_CASE("inject_faults basics") {
    auto fx = probe_fixture();
    Rng rng = make_stream(9, "faults");

    FaultModel none{FaultKind::Open, 0.0, 1.0, {}};
    CHECK(inject_faults(fx.model.rset, none, rng) == fx.model.rset);

    FaultModel all_open{FaultKind::Open, 1.0, 1.0, {}};
    auto opened = inject_faults(fx.model.rset, all_open, rng);
    for (double r : opened) CHECK(std::isinf(r));

    // Fully open network: every node floats to 0, every inverter reads high.
    Network net = build_network(fx.arch, opened);
    std::vector<std::uint8_t> ones(144, 1);
    auto out = net.forward(ones);
    for (auto b : out) CHECK(b == 1);

    FaultModel shorted{FaultKind::Short, 1.0, 7.5, {}};
    auto s = inject_faults(fx.model.rset, shorted, rng);
    for (double r : s) CHECK(r == 7.5);

    FaultModel revalue{FaultKind::RandomRevalue, 1.0, 1.0, ValueRange{2.0, 3.0}};
    auto rv = inject_faults(fx.model.rset, revalue, rng);
    for (double r : rv) {
        CHECK(r >= 2.0);
        CHECK(r <= 3.0);
    }
}

TEST_CASE("a fault inside tree k never changes another output bit") {
    auto fx = probe_fixture();
    Rng rng = make_stream(11, "fault.local");
    Network base = fx.model.network();

    std::vector<std::vector<std::size_t>> tree_genes(12);
    for (int k = 0; k < 12; ++k) tree_genes[k] = output_tree_gene_indices(fx.arch, k);

    std::uniform_int_distribution<int> tree_pick(0, 11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        int k = tree_pick(rng);
        const auto& genes = tree_genes[k];
        std::uniform_int_distribution<std::size_t> gene_pick(0, genes.size() - 1);
        std::size_t g = genes[gene_pick(rng)];

        auto faulted = fx.model.rset;
        double roll = u01(rng);
        if (roll < 0.34)
            faulted[g] = std::numeric_limits<double>::infinity();
        else if (roll < 0.67)
            faulted[g] = 1.0;
        else
            faulted[g] = random_resistance(ValueRange{}, rng);

        Network net = build_network(fx.arch, faulted);
        std::vector<std::uint8_t> px(144);
        for (auto& p : px) p = static_cast<std::uint8_t>(rng() & 1);
        auto want = base.forward(px);
        auto got = net.forward(px);
        for (int o = 0; o < 12; ++o)
            if (o != k) CHECK(got[o] == want[o]);
    }
}

TEST_CASE("fault sweep: rate zero equals plain evaluate, csv contract") {
    auto fx = probe_fixture();
    TestProtocol protocol;
    protocol.n_sets = 5;
    protocol.dist.sigma_noise = 0.05;

    EvalReport ref = evaluate(fx.model, fx.glyphs, protocol, stream_seed(77, "eval", 0));
    auto rows = fault_sweep(fx.model, fx.glyphs, protocol, FaultKind::Open,
                            {0.0, 0.02}, 3, 77);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].rate == 0.0);
    CHECK(rows[0].mean_acc == ref.accuracy);
    CHECK(rows[0].std_acc == 0.0);
    CHECK(rows[1].reps == 3);

    std::string csv = fault_sweep_csv(rows);
    CHECK(csv.rfind("rate,mean_acc,std_acc,reps\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    std::vector<double> unsorted{0.05, 0.01};
    CHECK_THROWS_AS(fault_sweep(fx.model, fx.glyphs, protocol, FaultKind::Open, unsorted,
                                2, 1),
                    ContractError);
}

TEST_CASE("model save/load round trip is byte exact and preserves forward") {
    auto fx = probe_fixture();
    fx.model.iterations = 123;
    fx.model.final_abe = 0.0;

    std::string text = model_to_text(fx.model);
    TrainedModel back = model_from_text(text, "mem");
    CHECK(model_to_text(back) == text);

    CHECK(back.arch == fx.model.arch);
    CHECK(back.rset == fx.model.rset);
    CHECK(back.codebook.main_codes == fx.model.codebook.main_codes);
    CHECK(back.input_map == fx.model.input_map);
    CHECK(back.image_width == 12);
    CHECK(back.seed == fx.model.seed);
    CHECK(back.converged == fx.model.converged);

    Network a = fx.model.network(), b = back.network();
    Rng rng = make_stream(5, "roundtrip.fwd");
    for (int t = 0; t < 50; ++t) {
        std::vector<std::uint8_t> px(144);
        for (auto& p : px) p = static_cast<std::uint8_t>(rng() & 1);
        CHECK(a.forward(px) == b.forward(px));
    }

    fs::path p = fs::temp_directory_path() / "memnet_model_test.mmn";
    save_model(fx.model, p.string());
    TrainedModel loaded = load_model(p.string());
    CHECK(model_to_text(loaded) == text);
    fs::remove(p);
}

TEST_CASE("model file error kinds are distinct") {
    auto fx = probe_fixture();
    std::string text = model_to_text(fx.model);

    // Truncation loses the checksum line entirely.
    std::string truncated = text.substr(0, text.size() / 2);
    try {
        model_from_text(truncated, "t");
        FAIL("expected checksum error");
    } catch (const FormatError& e) {
        CHECK(e.kind() == FormatError::Kind::Checksum);
    }

    // Corruption keeps the line but breaks the hash.
    std::string corrupt = text;
    corrupt[text.find("rset") + 6] ^= 1;
    try {
        model_from_text(corrupt, "c");
        FAIL("expected checksum error");
    } catch (const FormatError& e) {
        CHECK(e.kind() == FormatError::Kind::Checksum);
    }

    // A well-formed file of a future version is a version error: rebuild the
    // checksum so only the version differs.
    std::string future = text;
    future.replace(future.find(" v1"), 3, " v99");
    std::size_t pos = future.rfind("checksum ");
    std::string payload = future.substr(0, pos);
    char sum[32];
    std::snprintf(sum, sizeof sum, "%016llx",
                  static_cast<unsigned long long>(fnv1a64_ref(payload)));
    future = payload + "checksum fnv1a64 " + sum + "\n";
    try {
        model_from_text(future, "v");
        FAIL("expected version error");
    } catch (const FormatError& e) {
        CHECK(e.kind() == FormatError::Kind::Version);
    }

    CHECK_THROWS_AS(load_model("/nonexistent/nowhere.mmn"), IoError);
}
