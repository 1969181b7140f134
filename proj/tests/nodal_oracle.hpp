#pragma once

// Independent reference for network evaluation: per layer, assemble the full
// nodal-analysis system over all summing nodes by element stamping and solve
// it with a generic dense linear solver. Inverter inputs are modeled as
// infinite impedance, inverter outputs as ideal 0/logic_high sources. Nothing
// here shares code with Network::forward's closed-form divider.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "memnet/circuit.hpp"

namespace memnet_test {

struct OracleResult {
    std::vector<double> node_voltages;      // all cells, layer-major
    std::vector<std::uint8_t> output_bits;  // all cells, layer-major
    std::vector<std::uint8_t> final_bits;
};

inline OracleResult nodal_oracle(const memnet::ArchitectureSpec& arch,
                                 const std::vector<double>& rset,
                                 const std::vector<std::uint8_t>& input_bits) {
    auto sizes = memnet::layer_sizes(arch);
    OracleResult res;

    std::vector<double> source_v(input_bits.size());
    for (std::size_t i = 0; i < input_bits.size(); ++i)
        source_v[i] = input_bits[i] ? arch.logic_high : 0.0;

    std::size_t gene = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        int fan = arch.fan_ins[k];
        int n = sizes[k];
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        // Stamp every resistor of the layer into the system. Sources are
        // ideal, so a resistor from source s to node c contributes g to
        // G(c,c) and g*V_s to the right-hand side; the output resistor goes
        // to ground.
        std::size_t g0 = gene;
        for (int c = 0; c < n; ++c) {
            for (int i = 0; i < fan; ++i) {
                double g = 1.0 / rset[g0];
                G(c, c) += g;
                rhs(c) += g * source_v[static_cast<std::size_t>(c) * fan + i];
                ++g0;
            }
            G(c, c) += 1.0 / rset[g0];  // R_o to ground
            ++g0;
        }
        gene = g0;

        Eigen::VectorXd v = G.colPivHouseholderQr().solve(rhs);
        std::vector<double> next(n);
        for (int c = 0; c < n; ++c) {
            double nv = v(c);
            // A row can be singular only if every conductance is zero; the
            // node then floats and reads 0.
            if (!(G(c, c) > 0)) nv = 0.0;
            std::uint8_t bit = nv < arch.threshold ? 1 : 0;
            res.node_voltages.push_back(nv);
            res.output_bits.push_back(bit);
            next[c] = bit ? arch.logic_high : 0.0;
        }
        source_v = std::move(next);
    }

    res.final_bits.resize(sizes.back());
    std::size_t off = res.output_bits.size() - sizes.back();
    for (int c = 0; c < sizes.back(); ++c) res.final_bits[c] = res.output_bits[off + c];
    return res;
}

}  // namespace memnet_test
