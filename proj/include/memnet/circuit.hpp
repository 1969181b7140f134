#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memnet/errors.hpp"

namespace memnet {

// =============================================================================
// Network architecture
// =============================================================================
//
// The network is a forest of threshold-logic trees built from one cell type:
// N input resistors summing into a node loaded by an output resistor to
// ground, followed by an inverting comparator. Cells are wired in contiguous
// disjoint blocks, the unique fan-out-1 layout drawable with zero wire
// crossings.

struct ArchitectureSpec {
    int n_inputs = 0;
    std::vector<int> fan_ins;  // one entry per layer
    double logic_high = 1.0;
    double threshold = 0.5;  // comparator V_T, strictly inside (0, logic_high)

    int n_layers() const { return static_cast<int>(fan_ins.size()); }
    int n_outputs() const;  // n_inputs / product(fan_ins)

    // Throws ConfigError naming the offending layer or field.
    void validate() const;

    bool operator==(const ArchitectureSpec&) const = default;
};

// Cells per layer; sizes[k] = n_inputs / product(fan_ins[0..k]).
std::vector<int> layer_sizes(const ArchitectureSpec& arch);

// Genome length: sum over layers of cells * (fan_in + 1); the +1 is the
// output resistor of each cell.
std::size_t rset_len(const ArchitectureSpec& arch);

// =============================================================================
// Cell
// =============================================================================

struct CellParams {
    std::vector<double> input_resistances;
    double output_resistance = 1.0;
    double threshold = 0.5;
    double logic_high = 1.0;
};

// Passive divider at the summing node, output resistor tied to ground,
// comparator input drawing no current:
//     V_node = sum(G_i * V_i) / (G_o + sum(G_i)),  G = 1/R.
// A node with zero total conductance (all inputs open) floats; we define its
// voltage as 0, which makes a fully open-faulted cell read logic low and its
// inverter output high.
double cell_node_voltage(std::span<const double> voltages,
                         std::span<const double> input_resistances,
                         double output_resistance);
double cell_node_voltage(std::span<const double> voltages, const CellParams& cell);

// Inverting comparator: 1 iff V_node < V_T. The tie V_node == V_T reads 0.
int cell_output(std::span<const double> voltages, const CellParams& cell);

// =============================================================================
// Network
// =============================================================================
//
// Genome order is canonical layer-major: layer 0 first; within a layer,
// cell 0's input resistances then its output resistor, then cell 1, ...

class Network {
public:
    Network() = default;
    Network(ArchitectureSpec arch, std::vector<double> rset);

    const ArchitectureSpec& arch() const { return arch_; }
    const std::vector<double>& rset() const { return rset_; }
    const std::vector<int>& sizes() const { return sizes_; }
    int n_cells() const { return n_cells_; }

    // Gene index of the first resistor of cell `cell` in `layer`.
    std::size_t gene_base(int layer, int cell) const;

    // Output bits for one input pattern; bit order = cell order in the last
    // layer. Pure: no internal state survives the call.
    std::vector<std::uint8_t> forward(std::span<const std::uint8_t> input_bits) const;

    // Forward pass that also reports every cell's summing-node voltage and
    // output bit, in layer-major cell order. Used by the netlist self-check
    // and the nodal-analysis comparisons.
    struct Trace {
        std::vector<double> node_voltages;       // one per cell
        std::vector<std::uint8_t> output_bits;   // one per cell
        std::vector<std::uint8_t> final_bits;    // last layer only
    };
    Trace forward_trace(std::span<const std::uint8_t> input_bits) const;

private:
    ArchitectureSpec arch_;
    std::vector<double> rset_;
    std::vector<int> sizes_;
    std::vector<std::size_t> layer_gene_base_;
    int n_cells_ = 0;
    // Precomputed per gene: G_i / (G_o + sum G) * logic_high for input genes,
    // 0 for output-resistor genes; node voltage is then a masked sum.
    std::vector<double> weights_;
};

Network build_network(const ArchitectureSpec& arch, std::vector<double> rset);

// =============================================================================
// Structural checks
// =============================================================================

// Explicit wiring: per layer, per cell, the indices of consumed signals in
// the previous layer (layer -1 = primary inputs).
using Wiring = std::vector<std::vector<std::vector<int>>>;

struct WiringReport {
    bool crossover_free = false;
    int tree_count = 0;
    std::vector<int> tree_cell_counts;  // cells per output tree
    std::vector<std::string> violations;
};

// Checks fan-out exactly 1 per signal, monotone nondecreasing sink order
// (planar, contiguous blocks) and vertex-disjoint output trees.
WiringReport check_wiring(int n_inputs, const Wiring& wiring);

// The wiring build_network realizes, as an explicit table.
Wiring contiguous_wiring(const ArchitectureSpec& arch);

// Structural report for the architecture's canonical wiring. Never expected
// to fail for arches that validate; this is a test-surface guard.
WiringReport assert_no_crossover(const ArchitectureSpec& arch);

// Rset positions of every resistor in the subtree feeding one output. The
// n_outputs sets partition [0, rset_len).
std::vector<std::size_t> output_tree_gene_indices(const ArchitectureSpec& arch,
                                                  int output_index);

}  // namespace memnet
