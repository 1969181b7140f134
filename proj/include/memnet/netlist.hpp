#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "memnet/circuit.hpp"

namespace memnet {

// Minimal SPICE-like text netlist: one resistor statement per genome entry,
// one behavioral inverter per cell, one source stub per primary input.
// Node names are deterministic tree coordinates (IN<i>, N_L<l>_C<c>,
// OUT_L<l>_C<c>), resistor names R_L<l>_C<c>_I<k> / R_L<l>_C<c>_O.
struct Netlist {
    std::string text;
    int resistor_count = 0;
    int inverter_count = 0;
    int input_count = 0;
};

Netlist export_netlist(const ArchitectureSpec& arch, const std::vector<double>& rset);

struct NetlistResistor {
    std::string name;
    std::string node1;
    std::string node2;
    double value = 0.0;
};

struct NetlistInverter {
    std::string name;
    std::string input_node;
    std::string output_node;
    double threshold = 0.0;
    double logic_high = 0.0;
};

struct ParsedNetlist {
    std::vector<NetlistResistor> resistors;
    std::vector<NetlistInverter> inverters;
    std::vector<std::string> input_nodes;  // in declaration order
};

ParsedNetlist parse_netlist(const std::string& text, const std::string& name);

// Re-derives every cell's DC node voltage purely from the parsed resistor
// statements (conductance sums per named node) and the parsed inverter
// thresholds, then compares against the simulator's forward trace. Returns
// the maximum relative voltage error; output bits must agree exactly or this
// throws.
double netlist_selfcheck(const ParsedNetlist& parsed, const Network& net,
                         std::span<const std::uint8_t> input_bits);

}  // namespace memnet
