#pragma once

#include <cstdint>
#include <string>

#include "memnet/evolution.hpp"
#include "memnet/harness.hpp"

namespace memnet {

// Structured text (JSON) run configuration mirroring every pipeline knob.
// Loading validates all invariants and rejects unknown keys, naming the key
// path in the error.
struct RunConfig {
    std::uint64_t seed = 1;
    std::string glyphs = "builtin";  // built-in set id or directory of P1 files
    TrainConfig train;
    TestProtocol test_protocol;
};

RunConfig run_config_from_text(const std::string& text, const std::string& name);
RunConfig load_run_config(const std::string& path);

}  // namespace memnet
