#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "memnet/evolution.hpp"

namespace memnet {

// =============================================================================
// Test protocol
// =============================================================================

struct TestProtocol {
    DeformationDistribution dist;  // paper test defaults: 12% / 15 deg / 15% / 15 px
    long n_sets = 10000;           // deformed sets; total samples = 26 * n_sets

    void validate() const {
        dist.validate();
        if (n_sets < 1) throw ConfigError("test_protocol.n_sets must be >= 1");
    }
};

struct EvalReport {
    double accuracy = 0.0;  // rejects count as errors
    double abe = 0.0;       // bits per character
    int max_bit_error = 0;
    long rejects = 0;
    long n_sets = 0;
    long total = 0;
    // confusion[true][decoded], decoded index 26 = reject
    std::array<std::array<long, kNumGlyphs + 1>, kNumGlyphs> confusion{};
    double runtime_sec = 0.0;
    std::uint64_t seed = 0;
};

// Runs the protocol: for each set and character, deform, forward, decode.
// Test-set indices get derived RNG streams, so the report is identical for
// any worker count.
EvalReport evaluate(const TrainedModel& model, const GlyphSet& glyphs,
                    const TestProtocol& protocol, std::uint64_t seed,
                    unsigned threads = 1);

std::string report_text(const EvalReport& rep);
std::string report_csv(const EvalReport& rep);

// =============================================================================
// Fault injection
// =============================================================================

enum class FaultKind { Open, Short, RandomRevalue };

FaultKind fault_kind_from_string(const std::string& s);
std::string to_string(FaultKind kind);

struct FaultModel {
    FaultKind kind = FaultKind::Open;
    double rate = 0.0;             // per-resistor fault probability
    double short_value = 1.0;      // resistance a shorted element collapses to
    ValueRange revalue_range{};    // for RandomRevalue

    void validate() const {
        if (rate < 0 || rate > 1) throw ConfigError("fault rate outside [0,1]");
        if (!(short_value > 0)) throw ConfigError("fault short_value must be positive");
    }
};

// Each resistor independently faulted with probability `rate`. An open element
// is conductance 0 (resistance = +infinity, which the cell math reads as G=0).
std::vector<double> inject_faults(const std::vector<double>& rset, const FaultModel& fm,
                                  Rng& rng);

struct FaultSweepRow {
    double rate = 0.0;
    double mean_acc = 0.0;
    double std_acc = 0.0;
    int reps = 0;
};

// Accuracy-vs-rate table over `reps` independent fault draws per rate. The
// rate-0 rows reuse the unfaulted genome, so they equal evaluate() accuracy
// under the same seed.
std::vector<FaultSweepRow> fault_sweep(const TrainedModel& model, const GlyphSet& glyphs,
                                       const TestProtocol& protocol, FaultKind kind,
                                       const std::vector<double>& rates, int reps,
                                       std::uint64_t seed, unsigned threads = 1);

// CSV with header rate,mean_acc,std_acc,reps.
std::string fault_sweep_csv(const std::vector<FaultSweepRow>& rows);

// =============================================================================
// Model persistence
// =============================================================================
//
// Versioned plain text: header (magic, version, arch, logic levels, seed),
// codebook block, one resistance per line in canonical gene order with 17
// significant digits, trailing checksum line. Save -> load -> save is
// byte-identical.

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

std::string model_to_text(const TrainedModel& model);
TrainedModel model_from_text(const std::string& text, const std::string& name);

}  // namespace memnet
