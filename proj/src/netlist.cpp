#include "memnet/netlist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace memnet {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string node_name(int layer, int cell) {
    return "N_L" + std::to_string(layer) + "_C" + std::to_string(cell);
}

std::string out_name(int layer, int cell) {
    return "OUT_L" + std::to_string(layer) + "_C" + std::to_string(cell);
}

}  // namespace

Netlist export_netlist(const ArchitectureSpec& arch, const std::vector<double>& rset) {
    Network net = build_network(arch, rset);  // validates lengths and values
    auto sizes = net.sizes();

    std::ostringstream os;
    os << "* memnet netlist v1\n";
    os << "* arch " << arch.n_inputs;
    for (std::size_t i = 0; i < arch.fan_ins.size(); ++i)
        os << (i ? "," : " ") << arch.fan_ins[i];
    os << " logic_high " << fmt17(arch.logic_high) << " threshold "
       << fmt17(arch.threshold) << "\n";

    Netlist nl;
    for (int i = 0; i < arch.n_inputs; ++i) {
        os << "VIN" << i << " IN" << i << " 0 DC 0\n";
        ++nl.input_count;
    }
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        int fan = arch.fan_ins[k];
        for (int c = 0; c < sizes[k]; ++c) {
            std::size_t base = net.gene_base(static_cast<int>(k), c);
            std::string node = node_name(static_cast<int>(k), c);
            for (int i = 0; i < fan; ++i) {
                std::string src = k == 0 ? "IN" + std::to_string(c * fan + i)
                                         : out_name(static_cast<int>(k) - 1, c * fan + i);
                os << "R_L" << k << "_C" << c << "_I" << i << ' ' << src << ' ' << node
                   << ' ' << fmt17(rset[base + i]) << "\n";
                ++nl.resistor_count;
            }
            os << "R_L" << k << "_C" << c << "_O " << node << " 0 " << fmt17(rset[base + fan])
               << "\n";
            ++nl.resistor_count;
            os << "XINV_L" << k << "_C" << c << ' ' << node << ' '
               << out_name(static_cast<int>(k), c) << " INV VT=" << fmt17(arch.threshold)
               << " VHI=" << fmt17(arch.logic_high) << "\n";
            ++nl.inverter_count;
        }
    }
    os << ".end\n";
    nl.text = os.str();
    return nl;
}

ParsedNetlist parse_netlist(const std::string& text, const std::string& name) {
    ParsedNetlist parsed;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '*' || line[0] == '.') continue;
        std::istringstream ls(line);
        if (line[0] == 'V') {
            std::string tag, node, gnd, dc;
            ls >> tag >> node >> gnd >> dc;
            if (node.empty())
                throw FormatError(FormatError::Kind::Parse, name + ": bad source: " + line);
            parsed.input_nodes.push_back(node);
        } else if (line[0] == 'R') {
            NetlistResistor r;
            std::string value;
            if (!(ls >> r.name >> r.node1 >> r.node2 >> value))
                throw FormatError(FormatError::Kind::Parse, name + ": bad resistor: " + line);
            r.value = std::stod(value);
            parsed.resistors.push_back(std::move(r));
        } else if (line[0] == 'X') {
            NetlistInverter inv;
            std::string kind, vt, vhi;
            if (!(ls >> inv.name >> inv.input_node >> inv.output_node >> kind >> vt >> vhi) ||
                kind != "INV" || vt.rfind("VT=", 0) != 0 || vhi.rfind("VHI=", 0) != 0)
                throw FormatError(FormatError::Kind::Parse, name + ": bad inverter: " + line);
            inv.threshold = std::stod(vt.substr(3));
            inv.logic_high = std::stod(vhi.substr(4));
            parsed.inverters.push_back(std::move(inv));
        } else {
            throw FormatError(FormatError::Kind::Parse, name + ": unknown statement: " + line);
        }
    }
    return parsed;
}

double netlist_selfcheck(const ParsedNetlist& parsed, const Network& net,
                         std::span<const std::uint8_t> input_bits) {
    const auto& arch = net.arch();
    if (static_cast<int>(parsed.input_nodes.size()) != arch.n_inputs)
        throw ContractError("netlist selfcheck: input stub count mismatch");

    // Known voltages: input nodes from the bits, inverter outputs once their
    // summing node is solved. Inverter inputs draw no current, so each summing
    // node voltage is sum(G_i * V_src) / sum(G) over its attached resistors.
    std::map<std::string, double> known;
    for (int i = 0; i < arch.n_inputs; ++i)
        known[parsed.input_nodes[i]] = input_bits[i] ? arch.logic_high : 0.0;
    known["0"] = 0.0;

    std::map<std::string, std::vector<const NetlistResistor*>> by_node;
    for (const auto& r : parsed.resistors) {
        by_node[r.node1].push_back(&r);
        by_node[r.node2].push_back(&r);
    }

    // Keep inverters in declaration order; the exporter emits layers in
    // evaluation order, so each inverter's sources are known when reached.
    Network::Trace trace = net.forward_trace(input_bits);
    if (parsed.inverters.size() != trace.node_voltages.size())
        throw ContractError("netlist selfcheck: inverter count mismatch");

    double max_rel = 0.0;
    for (std::size_t i = 0; i < parsed.inverters.size(); ++i) {
        const auto& inv = parsed.inverters[i];
        auto it = by_node.find(inv.input_node);
        if (it == by_node.end())
            throw ContractError("netlist selfcheck: node " + inv.input_node +
                                " has no resistors");
        double gsum = 0.0, isum = 0.0;
        for (const NetlistResistor* r : it->second) {
            const std::string& other = r->node1 == inv.input_node ? r->node2 : r->node1;
            double g = 1.0 / r->value;
            auto kv = known.find(other);
            if (kv == known.end())
                throw ContractError("netlist selfcheck: node " + other +
                                    " referenced before it is driven");
            gsum += g;
            isum += g * kv->second;
        }
        double v = gsum > 0 ? isum / gsum : 0.0;
        double bit = v < inv.threshold ? inv.logic_high : 0.0;
        known[inv.output_node] = bit;

        double ref = trace.node_voltages[i];
        double denom = std::max(std::abs(ref), 1e-30);
        max_rel = std::max(max_rel, std::abs(v - ref) / denom);
        int ref_bit = trace.output_bits[i];
        if ((bit != 0.0) != (ref_bit != 0))
            throw ContractError("netlist selfcheck: output bit mismatch at " + inv.name);
    }
    return max_rel;
}

}  // namespace memnet
