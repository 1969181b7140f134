#include <doctest.h>

#include <cmath>

#include "memnet/circuit.hpp"
#include "memnet/evolution.hpp"
#include "nodal_oracle.hpp"

using namespace memnet;

namespace {

ArchitectureSpec paper_arch() {
    ArchitectureSpec a;
    a.n_inputs = 1296;
    a.fan_ins = {6, 6, 3};
    return a;
}

ArchitectureSpec tiny_arch(int n, std::vector<int> fans) {
    ArchitectureSpec a;
    a.n_inputs = n;
    a.fan_ins = std::move(fans);
    return a;
}

}  // namespace

TEST_CASE("layer_sizes and rset_len") {
    CHECK(layer_sizes(paper_arch()) == std::vector<int>{216, 36, 12});
    CHECK(layer_sizes(tiny_arch(12, {12})) == std::vector<int>{1});
    CHECK_THROWS_AS(layer_sizes(tiny_arch(10, {3})), ConfigError);

    CHECK(rset_len(paper_arch()) == 1812);  // 216*7 + 36*7 + 12*4
    CHECK(rset_len(tiny_arch(2, {2})) == 3);
    CHECK(rset_len(tiny_arch(8, {2, 2, 2})) == 21);
}

TEST_CASE("layer error names the offending layer") {
    ArchitectureSpec a = tiny_arch(12, {6, 4});
    try {
        layer_sizes(a);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("layer 1") != std::string::npos);
    }
}

TEST_CASE("cell node voltage matches hand-solved dividers") {
    CellParams cell;
    cell.input_resistances = {1.0, 1.0};
    cell.output_resistance = 1.0;

    // All inputs at 0 pull nothing through the divider.
    std::vector<double> v00{0.0, 0.0};
    CHECK(cell_node_voltage(v00, cell) == 0.0);

    // One-node nodal analysis with R1=R2=Ro=1:
    //   (1,1): V*(G1+G2+Go) = G1+G2        -> V = 2/3
    //   (1,0): V*(G1+G2+Go) = G1           -> V = 1/3
    std::vector<double> v11{1.0, 1.0};
    CHECK(cell_node_voltage(v11, cell) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    std::vector<double> v10{1.0, 0.0};
    CHECK(cell_node_voltage(v10, cell) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    CHECK(cell_output(v00, cell) == 1);  // 0 < 0.5
    CHECK(cell_output(v11, cell) == 0);  // 2/3 > 0.5
    CHECK(cell_output(v10, cell) == 1);  // 1/3 < 0.5

    std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(cell_node_voltage(wrong, cell), ContractError);
}

TEST_CASE("threshold tie reads 0") {
    CellParams cell;
    cell.input_resistances = {1.0};
    cell.output_resistance = 1.0;
    cell.threshold = 0.5;
    std::vector<double> v{1.0};  // node = G/(G+Go) = exactly 0.5
    CHECK(cell_node_voltage(v, cell) == 0.5);
    CHECK(cell_output(v, cell) == 0);
}

TEST_CASE("build_network validates genome length") {
    auto arch = paper_arch();
    std::vector<double> rset(1812, 1.0);
    Network net = build_network(arch, rset);
    CHECK(net.n_cells() == 264);

    CHECK(build_network(tiny_arch(2, {2}), {1.0, 2.0, 3.0}).n_cells() == 1);
    CHECK_THROWS_AS(build_network(tiny_arch(2, {2}), {1.0, 2.0, 3.0, 4.0}), ConfigError);
}

TEST_CASE("single cell forward") {
    Network net = build_network(tiny_arch(2, {2}), {1.0, 1.0, 1.0});
    std::vector<std::uint8_t> in00{0, 0}, in11{1, 1};
    CHECK(net.forward(in00) == std::vector<std::uint8_t>{1});
    CHECK(net.forward(in11) == std::vector<std::uint8_t>{0});
    // Pure function: same input twice.
    CHECK(net.forward(in11) == net.forward(in11));

    std::vector<std::uint8_t> bad{1};
    CHECK_THROWS_AS(net.forward(bad), ContractError);
}

TEST_CASE("no-crossover report for canonical wirings") {
    auto rep = assert_no_crossover(paper_arch());
    CHECK(rep.crossover_free);
    CHECK(rep.tree_count == 12);
    for (int c : rep.tree_cell_counts) CHECK(c == 22);  // 1 + 3 + 18

    auto rep1 = assert_no_crossover(tiny_arch(2, {2}));
    CHECK(rep1.crossover_free);
    CHECK(rep1.tree_count == 1);
}

TEST_CASE("hand-built wiring with a shared source is flagged") {
    // Two cells both consuming input 0: fan-out 2 on one signal.
    Wiring w{{{0, 1}, {0, 2}}};
    auto rep = check_wiring(4, w);
    CHECK_FALSE(rep.crossover_free);
    CHECK(rep.violations.size() >= 1);

    // Out-of-order sinks cross even with fan-out 1.
    Wiring crossed{{{2, 3}, {0, 1}}};
    auto rep2 = check_wiring(4, crossed);
    CHECK_FALSE(rep2.crossover_free);
}

TEST_CASE("output tree gene indices partition the genome") {
    auto arch = paper_arch();
    std::vector<bool> seen(rset_len(arch), false);
    for (int o = 0; o < 12; ++o) {
        auto genes = output_tree_gene_indices(arch, o);
        CHECK(genes.size() == 151);  // 18*7 + 3*7 + 1*4
        for (auto g : genes) {
            CHECK_FALSE(seen[g]);
            seen[g] = true;
        }
    }
    for (bool s : seen) CHECK(s);

    auto single = output_tree_gene_indices(tiny_arch(2, {2}), 0);
    CHECK(single == std::vector<std::size_t>{0, 1, 2});
    CHECK_THROWS_AS(output_tree_gene_indices(tiny_arch(2, {2}), 1), ContractError);
}

TEST_CASE("divider evaluation matches the nodal-analysis oracle") {
    // Random small architectures (genome <= 50), random genomes and inputs.
    std::vector<ArchitectureSpec> arches = {
        tiny_arch(2, {2}),      tiny_arch(4, {2, 2}),  tiny_arch(6, {3}),
        tiny_arch(8, {2, 2, 2}), tiny_arch(12, {4, 3}), tiny_arch(9, {3, 3}),
        tiny_arch(12, {12}),
    };
    Rng rng = make_stream(7, "oracle.unit");
    ValueRange range;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto& arch = arches[trial % arches.size()];
        REQUIRE(rset_len(arch) <= 50);
        auto rset = random_rset(arch, range, rng);
        std::vector<std::uint8_t> bits(arch.n_inputs);
        for (auto& b : bits) b = static_cast<std::uint8_t>(coin(rng));

        Network net = build_network(arch, rset);
        auto trace = net.forward_trace(bits);
        auto oracle = memnet_test::nodal_oracle(arch, rset, bits);

        REQUIRE(trace.node_voltages.size() == oracle.node_voltages.size());
        for (std::size_t i = 0; i < trace.node_voltages.size(); ++i) {
            double want = oracle.node_voltages[i];
            double got = trace.node_voltages[i];
            double rel = std::abs(got - want) / std::max(std::abs(want), 1e-30);
            if (want == 0.0)
                CHECK(got == 0.0);
            else
                CHECK(rel <= 1e-9);
        }
        CHECK(trace.output_bits == oracle.output_bits);
        CHECK(trace.final_bits == oracle.final_bits);
    }
}

TEST_CASE("raising one input never lowers the node voltage") {
    Rng rng = make_stream(11, "monotone");
    ValueRange range;
    std::uniform_real_distribution<double> uv(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        int fan = 2 + static_cast<int>(rng() % 5);
        CellParams cell;
        for (int i = 0; i < fan; ++i)
            cell.input_resistances.push_back(random_resistance(range, rng));
        cell.output_resistance = random_resistance(range, rng);
        std::vector<double> v(fan);
        for (auto& x : v) x = uv(rng);
        double base = cell_node_voltage(v, cell);
        int bump = static_cast<int>(rng() % fan);
        std::uniform_real_distribution<double> ub(v[bump], 1.0);
        v[bump] = ub(rng);
        CHECK(cell_node_voltage(v, cell) >= base - 1e-15);
    }
}

TEST_CASE("scaling every resistance in a cell leaves the node voltage unchanged") {
    Rng rng = make_stream(13, "homogeneity");
    ValueRange range;
    std::uniform_real_distribution<double> uv(0.0, 1.0);
    std::uniform_real_distribution<double> ul(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        int fan = 1 + static_cast<int>(rng() % 6);
        CellParams cell;
        for (int i = 0; i < fan; ++i)
            cell.input_resistances.push_back(random_resistance(range, rng));
        cell.output_resistance = random_resistance(range, rng);
        std::vector<double> v(fan);
        for (auto& x : v) x = uv(rng);
        double before = cell_node_voltage(v, cell);
        double lambda = std::exp(ul(rng));
        for (auto& r : cell.input_resistances) r *= lambda;
        cell.output_resistance *= lambda;
        CHECK(cell_node_voltage(v, cell) == doctest::Approx(before).epsilon(1e-12));
    }
}
