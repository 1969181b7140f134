#include <doctest.h>

#include <string>

#include "memnet/config.hpp"

using namespace memnet;

namespace {

const char* kMinimal = R"({"arch": {"n_inputs": 1296, "fan_ins": [6, 6, 3]}})";

}  // namespace

TEST_CASE("minimal config gets defaults") {
    RunConfig cfg = run_config_from_text(kMinimal, "mem");
    CHECK(cfg.seed == 1);
    CHECK(cfg.glyphs == "builtin");
    CHECK(cfg.train.arch.n_inputs == 1296);
    CHECK(cfg.train.selection.pool_target == 400);
    CHECK(cfg.train.genetic.offspring == 800);
    CHECK(cfg.train.refine.min_spacing == 3);
    CHECK(cfg.test_protocol.n_sets == 10000);
    CHECK(cfg.train.input_map == InputMapKind::RowMajor);
}

TEST_CASE("missing keys are named") {
    try {
        run_config_from_text(R"({"arch": {"n_inputs": 1296}})", "mem");
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fan_ins") != std::string::npos);
    }
    try {
        run_config_from_text(R"({"seed": 3})", "mem");
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("arch") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected with their path") {
    try {
        run_config_from_text(
            R"({"arch": {"n_inputs": 4, "fan_ins": [2], "fanins": 1}})", "mem");
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("arch.fanins") != std::string::npos);
    }
    try {
        run_config_from_text(R"({"arch": {"n_inputs": 4, "fan_ins": [2]}, "turbo": 9})",
                             "mem");
        FAIL("expected error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("turbo") != std::string::npos);
    }
}

TEST_CASE("invariants are validated at load") {
    CHECK_THROWS_AS(
        run_config_from_text(R"({"arch": {"n_inputs": 10, "fan_ins": [3]}})", "mem"),
        ConfigError);
    CHECK_THROWS_AS(
        run_config_from_text(
            R"({"arch": {"n_inputs": 4, "fan_ins": [2]}, "value_range": {"r_min": -1}})",
            "mem"),
        ConfigError);
    CHECK_THROWS_AS(
        run_config_from_text(
            R"({"arch": {"n_inputs": 4, "fan_ins": [2]},
                "refine": {"train_dist": {"sigma_noise": -0.1}}})",
            "mem"),
        ConfigError);
    CHECK_THROWS_AS(run_config_from_text("not json at all", "mem"), ConfigError);
}

TEST_CASE("full config round trip of every block") {
    const char* text = R"({
        "seed": 7,
        "glyphs": "builtin",
        "arch": {"n_inputs": 1296, "fan_ins": [6, 6, 3], "logic_high": 1.0, "threshold": 0.5},
        "value_range": {"r_min": 1.0, "r_max": 100.0},
        "input_map": "column-stride",
        "selection": {"pool_target": 400, "keep": 5, "noise_p": 0.12,
                      "trials_per_char": 4, "sample_cap": 100000},
        "genetic": {"offspring": 800, "keep": 5},
        "refine": {"train_dist": {"sigma_noise": 0.04, "sigma_rot_deg": 5.0,
                                  "sigma_scale": 0.05, "sigma_shift_px": 5.0,
                                  "max_shift_px": 5.0},
                   "batch": 4, "resample_prob": 0.25, "immune_batch": 16,
                   "immune_batches": 3, "min_spacing": 3, "max_iters": 100000},
        "test_protocol": {"dist": {"sigma_noise": 0.12, "sigma_rot_deg": 15.0,
                                   "sigma_scale": 0.15, "sigma_shift_px": 15.0,
                                   "max_shift_px": 5.0, "mode": "truncated-normal"},
                          "n_sets": 10000}
    })";
    RunConfig cfg = run_config_from_text(text, "mem");
    CHECK(cfg.seed == 7);
    CHECK(cfg.train.input_map == InputMapKind::ColumnStride);
    CHECK(cfg.train.value_range.r_max == 100.0);
    CHECK(cfg.train.refine.train_dist.sigma_shift_px == 5.0);
    CHECK(cfg.train.refine.train_dist.max_shift_px == 5.0);
    CHECK(cfg.test_protocol.dist.sigma_rot_deg == 15.0);
    CHECK(cfg.test_protocol.dist.mode == SampleMode::TruncatedNormal);
}
