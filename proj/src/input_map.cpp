#include "memnet/input_map.hpp"

#include <numeric>

namespace memnet {

std::string to_string(InputMapKind kind) {
    switch (kind) {
        case InputMapKind::RowMajor: return "row-major";
        case InputMapKind::ColumnStride: return "column-stride";
    }
    return "row-major";
}

InputMapKind input_map_kind_from_string(const std::string& s) {
    if (s == "row-major") return InputMapKind::RowMajor;
    if (s == "column-stride") return InputMapKind::ColumnStride;
    throw ConfigError("unknown input_map '" + s + "' (row-major, column-stride)");
}

std::vector<std::uint8_t> InputMap::apply(std::span<const std::uint8_t> pixels) const {
    if (is_identity()) return {pixels.begin(), pixels.end()};
    if (pixels.size() != line_to_pixel_.size())
        throw ContractError("input map: pixel count does not match n_inputs");
    std::vector<std::uint8_t> lines(pixels.size());
    for (std::size_t i = 0; i < lines.size(); ++i) lines[i] = pixels[line_to_pixel_[i]];
    return lines;
}

InputMap InputMap::make(InputMapKind kind, const ArchitectureSpec& arch, int width,
                        int height) {
    arch.validate();
    if (static_cast<long long>(width) * height != arch.n_inputs)
        throw ConfigError("input map: image size does not match n_inputs");

    InputMap map;
    map.kind_ = kind;
    if (kind == InputMapKind::RowMajor) return map;  // identity

    int n_out = arch.n_outputs();
    if (width % n_out != 0)
        throw ConfigError("column-stride input map needs image width divisible by " +
                          std::to_string(n_out) + " outputs, got width " +
                          std::to_string(width));
    int cols_per_tree = width / n_out;
    map.line_to_pixel_.resize(arch.n_inputs);
    int line = 0;
    for (int tree = 0; tree < n_out; ++tree) {
        for (int c = 0; c < cols_per_tree; ++c) {
            int col = tree + c * n_out;
            for (int row = 0; row < height; ++row)
                map.line_to_pixel_[line++] = row * width + col;
        }
    }
    return map;
}

}  // namespace memnet
