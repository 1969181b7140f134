#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memnet/circuit.hpp"

namespace memnet {

// How image pixels are routed onto the network's input lines. The network
// wiring itself is always the contiguous crossover-free forest; this mapping
// is the fixed harness between the pixel array and the input lines, so it
// does not add wire crossings inside the network.
//
//   RowMajor      line i carries pixel i (raster order). Every output tree
//                 then watches a horizontal band of the image.
//   ColumnStride  output tree k watches image columns {k, k+N_o, k+2*N_o...},
//                 each tree column laid out top to bottom. Tree membership is
//                 then invariant under vertical shifts and degrades gradually
//                 under horizontal ones.
enum class InputMapKind { RowMajor, ColumnStride };

std::string to_string(InputMapKind kind);
InputMapKind input_map_kind_from_string(const std::string& s);

class InputMap {
public:
    InputMap() = default;

    InputMapKind kind() const { return kind_; }
    bool is_identity() const { return line_to_pixel_.empty(); }

    int pixel_for_line(int line) const {
        return is_identity() ? line : line_to_pixel_[line];
    }

    // Reorder row-major pixel bits into network input-line order.
    std::vector<std::uint8_t> apply(std::span<const std::uint8_t> pixels) const;

    static InputMap make(InputMapKind kind, const ArchitectureSpec& arch, int width,
                         int height);

private:
    InputMapKind kind_ = InputMapKind::RowMajor;
    std::vector<int> line_to_pixel_;  // empty = identity
};

}  // namespace memnet
