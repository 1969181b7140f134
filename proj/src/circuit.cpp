#include "memnet/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace memnet {

namespace {

std::string layer_list(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    return os.str();
}

}  // namespace

int ArchitectureSpec::n_outputs() const {
    long long n = n_inputs;
    for (int f : fan_ins) {
        if (f <= 0 || n % f != 0) return 0;
        n /= f;
    }
    return static_cast<int>(n);
}

void ArchitectureSpec::validate() const {
    if (n_inputs <= 0) throw ConfigError("arch: n_inputs must be positive");
    if (fan_ins.empty()) throw ConfigError("arch: fan_ins must name at least one layer");
    if (!(logic_high > 0) || !std::isfinite(logic_high))
        throw ConfigError("arch: logic_high must be positive and finite");
    if (!(threshold > 0) || !(threshold < logic_high))
        throw ConfigError("arch: threshold must lie strictly between 0 and logic_high");
    long long n = n_inputs;
    for (std::size_t k = 0; k < fan_ins.size(); ++k) {
        int f = fan_ins[k];
        if (f <= 0) {
            std::ostringstream os;
            os << "arch: fan_ins[" << k << "] must be positive, got " << f;
            throw ConfigError(os.str());
        }
        if (n % f != 0) {
            std::ostringstream os;
            os << "arch: layer " << k << " needs " << n << " signals divisible by fan-in "
               << f << " (n_inputs=" << n_inputs << ", fan_ins=" << layer_list(fan_ins)
               << ")";
            throw ConfigError(os.str());
        }
        n /= f;
    }
    // n >= 1 is guaranteed by the divisibility walk (each step divides by >= 1).
}

std::vector<int> layer_sizes(const ArchitectureSpec& arch) {
    arch.validate();
    std::vector<int> sizes;
    sizes.reserve(arch.fan_ins.size());
    long long n = arch.n_inputs;
    for (int f : arch.fan_ins) {
        n /= f;
        sizes.push_back(static_cast<int>(n));
    }
    return sizes;
}

std::size_t rset_len(const ArchitectureSpec& arch) {
    auto sizes = layer_sizes(arch);
    std::size_t len = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k)
        len += static_cast<std::size_t>(sizes[k]) * (arch.fan_ins[k] + 1);
    return len;
}

double cell_node_voltage(std::span<const double> voltages,
                         std::span<const double> input_resistances,
                         double output_resistance) {
    if (voltages.size() != input_resistances.size())
        throw ContractError("cell_node_voltage: voltage count does not match fan-in");
    double num = 0.0;
    double den = 1.0 / output_resistance;
    for (std::size_t i = 0; i < voltages.size(); ++i) {
        double g = 1.0 / input_resistances[i];
        num += g * voltages[i];
        den += g;
    }
    if (den == 0.0) return 0.0;  // fully open node floats; read as 0
    return num / den;
}

double cell_node_voltage(std::span<const double> voltages, const CellParams& cell) {
    return cell_node_voltage(voltages, cell.input_resistances, cell.output_resistance);
}

int cell_output(std::span<const double> voltages, const CellParams& cell) {
    return cell_node_voltage(voltages, cell) < cell.threshold ? 1 : 0;
}

Network::Network(ArchitectureSpec arch, std::vector<double> rset)
    : arch_(std::move(arch)), rset_(std::move(rset)) {
    arch_.validate();
    std::size_t want = rset_len(arch_);
    if (rset_.size() != want) {
        std::ostringstream os;
        os << "rset length " << rset_.size() << " does not match architecture ("
           << want << " expected)";
        throw ConfigError(os.str());
    }
    for (std::size_t i = 0; i < rset_.size(); ++i) {
        double r = rset_[i];
        if (std::isnan(r) || r <= 0) {
            std::ostringstream os;
            os << "rset[" << i << "] must be positive, got " << r;
            throw ConfigError(os.str());
        }
    }
    sizes_ = layer_sizes(arch_);
    n_cells_ = std::accumulate(sizes_.begin(), sizes_.end(), 0);
    layer_gene_base_.resize(sizes_.size() + 1, 0);
    for (std::size_t k = 0; k < sizes_.size(); ++k)
        layer_gene_base_[k + 1] =
            layer_gene_base_[k] +
            static_cast<std::size_t>(sizes_[k]) * (arch_.fan_ins[k] + 1);

    // Per-cell divider weights. For binary drive the node voltage is the sum
    // of weights over inked inputs; the denominator is input-independent.
    weights_.assign(rset_.size(), 0.0);
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        int fan = arch_.fan_ins[k];
        for (int c = 0; c < sizes_[k]; ++c) {
            std::size_t base = gene_base(static_cast<int>(k), c);
            double den = 1.0 / rset_[base + fan];  // output resistor
            for (int i = 0; i < fan; ++i) den += 1.0 / rset_[base + i];
            double inv = den > 0 ? 1.0 / den : 0.0;
            for (int i = 0; i < fan; ++i)
                weights_[base + i] = (1.0 / rset_[base + i]) * inv * arch_.logic_high;
        }
    }
}

std::size_t Network::gene_base(int layer, int cell) const {
    return layer_gene_base_[layer] +
           static_cast<std::size_t>(cell) * (arch_.fan_ins[layer] + 1);
}

std::vector<std::uint8_t> Network::forward(std::span<const std::uint8_t> input_bits) const {
    if (static_cast<int>(input_bits.size()) != arch_.n_inputs)
        throw ContractError("forward: input length does not match n_inputs");
    std::vector<std::uint8_t> cur(input_bits.begin(), input_bits.end());
    std::vector<std::uint8_t> next;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        int fan = arch_.fan_ins[k];
        next.assign(sizes_[k], 0);
        for (int c = 0; c < sizes_[k]; ++c) {
            std::size_t base = gene_base(static_cast<int>(k), c);
            double v = 0.0;
            const std::uint8_t* in = cur.data() + static_cast<std::size_t>(c) * fan;
            for (int i = 0; i < fan; ++i)
                if (in[i]) v += weights_[base + i];
            next[c] = v < arch_.threshold ? 1 : 0;
        }
        cur.swap(next);
    }
    return cur;
}

Network::Trace Network::forward_trace(std::span<const std::uint8_t> input_bits) const {
    if (static_cast<int>(input_bits.size()) != arch_.n_inputs)
        throw ContractError("forward_trace: input length does not match n_inputs");
    Trace t;
    t.node_voltages.reserve(n_cells_);
    t.output_bits.reserve(n_cells_);
    std::vector<std::uint8_t> cur(input_bits.begin(), input_bits.end());
    std::vector<std::uint8_t> next;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        int fan = arch_.fan_ins[k];
        next.assign(sizes_[k], 0);
        for (int c = 0; c < sizes_[k]; ++c) {
            std::size_t base = gene_base(static_cast<int>(k), c);
            double v = 0.0;
            const std::uint8_t* in = cur.data() + static_cast<std::size_t>(c) * fan;
            for (int i = 0; i < fan; ++i)
                if (in[i]) v += weights_[base + i];
            std::uint8_t bit = v < arch_.threshold ? 1 : 0;
            t.node_voltages.push_back(v);
            t.output_bits.push_back(bit);
            next[c] = bit;
        }
        cur.swap(next);
    }
    t.final_bits = cur;
    return t;
}

Network build_network(const ArchitectureSpec& arch, std::vector<double> rset) {
    return Network(arch, std::move(rset));
}

WiringReport check_wiring(int n_inputs, const Wiring& wiring) {
    WiringReport rep;
    auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

    int prev_count = n_inputs;
    for (std::size_t k = 0; k < wiring.size(); ++k) {
        const auto& layer = wiring[k];
        std::vector<int> fanout(prev_count, 0);
        int last_sink_source = -1;
        for (std::size_t c = 0; c < layer.size(); ++c) {
            for (int src : layer[c]) {
                std::ostringstream at;
                at << "layer " << k << " cell " << c;
                if (src < 0 || src >= prev_count) {
                    fail(at.str() + ": source index out of range");
                    continue;
                }
                fanout[src] += 1;
                if (fanout[src] > 1)
                    fail(at.str() + ": source " + std::to_string(src) +
                         " feeds more than one sink (crossover)");
                if (src < last_sink_source)
                    fail(at.str() + ": source " + std::to_string(src) +
                         " breaks monotone sink order (crossover)");
                last_sink_source = std::max(last_sink_source, src);
            }
        }
        for (int s = 0; s < prev_count; ++s)
            if (fanout[s] == 0)
                fail("layer " + std::to_string(k) + ": signal " + std::to_string(s) +
                     " has no sink");
        prev_count = static_cast<int>(layer.size());
    }

    rep.crossover_free = rep.violations.empty();
    if (rep.crossover_free && !wiring.empty()) {
        // Walk each output's subtree; disjointness then follows from fan-out 1,
        // but count the cells to report tree sizes and double-check coverage.
        int n_out = static_cast<int>(wiring.back().size());
        rep.tree_count = n_out;
        std::size_t total = 0;
        for (int o = 0; o < n_out; ++o) {
            int count = 0;
            std::vector<int> frontier{o};
            for (int k = static_cast<int>(wiring.size()) - 1; k >= 0; --k) {
                count += static_cast<int>(frontier.size());
                std::vector<int> below;
                for (int c : frontier)
                    for (int src : wiring[k][c]) below.push_back(src);
                frontier.swap(below);
            }
            rep.tree_cell_counts.push_back(count);
            total += count;
        }
        std::size_t all_cells = 0;
        for (const auto& layer : wiring) all_cells += layer.size();
        if (total != all_cells) {
            rep.crossover_free = false;
            rep.violations.push_back("output trees do not cover every cell exactly once");
        }
    }
    return rep;
}

Wiring contiguous_wiring(const ArchitectureSpec& arch) {
    auto sizes = layer_sizes(arch);
    Wiring wiring(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        int fan = arch.fan_ins[k];
        wiring[k].resize(sizes[k]);
        for (int c = 0; c < sizes[k]; ++c) {
            wiring[k][c].resize(fan);
            for (int i = 0; i < fan; ++i) wiring[k][c][i] = c * fan + i;
        }
    }
    return wiring;
}

WiringReport assert_no_crossover(const ArchitectureSpec& arch) {
    arch.validate();
    return check_wiring(arch.n_inputs, contiguous_wiring(arch));
}

std::vector<std::size_t> output_tree_gene_indices(const ArchitectureSpec& arch,
                                                  int output_index) {
    auto sizes = layer_sizes(arch);
    int n_out = sizes.back();
    if (output_index < 0 || output_index >= n_out)
        throw ContractError("output_tree_gene_indices: output index out of range");

    std::vector<std::size_t> layer_base(sizes.size() + 1, 0);
    for (std::size_t k = 0; k < sizes.size(); ++k)
        layer_base[k + 1] = layer_base[k] +
                            static_cast<std::size_t>(sizes[k]) * (arch.fan_ins[k] + 1);

    std::vector<std::size_t> genes;
    std::vector<int> frontier{output_index};
    for (int k = static_cast<int>(sizes.size()) - 1; k >= 0; --k) {
        int fan = arch.fan_ins[k];
        std::vector<int> below;
        for (int c : frontier) {
            std::size_t base = layer_base[k] + static_cast<std::size_t>(c) * (fan + 1);
            for (int i = 0; i <= fan; ++i) genes.push_back(base + i);
            for (int i = 0; i < fan; ++i) below.push_back(c * fan + i);
        }
        frontier.swap(below);
    }
    std::sort(genes.begin(), genes.end());
    return genes;
}

}  // namespace memnet
