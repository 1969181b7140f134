#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "memnet/circuit.hpp"
#include "memnet/codes.hpp"
#include "memnet/imaging.hpp"
#include "memnet/input_map.hpp"
#include "memnet/rng.hpp"

namespace memnet {

// =============================================================================
// Configuration
// =============================================================================

struct ValueRange {
    double r_min = 1.0;
    double r_max = 1e4;
    // Output resistors are drawn log-uniform from the top (1 - output_bias)
    // of the log range. 0 samples them like input resistors. Biasing the
    // load resistance high keeps summing nodes responsive instead of being
    // swamped by the load conductance.
    double output_bias = 0.0;

    void validate() const {
        if (!(r_min > 0) || !(r_max > r_min))
            throw ConfigError("value_range: need 0 < r_min < r_max");
        if (output_bias < 0 || output_bias >= 1)
            throw ConfigError("value_range: output_bias must be in [0,1)");
    }

    double output_min() const {
        return r_min * std::pow(r_max / r_min, output_bias);
    }
};

struct SelectionConfig {
    int pool_target = 400;      // Rsets that must pass the unique-code filter
    int keep = 5;
    double noise_p = 0.12;      // salt-and-pepper rate used for ranking
    int trials_per_char = 4;
    long sample_cap = 200000;   // give up (starvation) after this many draws

    void validate() const;
};

struct GeneticConfig {
    int offspring = 800;
    int keep = 5;

    void validate() const;
};

struct RefineConfig {
    DeformationDistribution train_dist;  // paper values: 4% / 5 deg / 5% / 5 px
    int batch = 4;             // deformed samples per character per move evaluation
    double resample_prob = 0.25;  // per-gene resample probability inside chosen trees
    int immune_batch = 16;     // samples per character per immunity batch
    int immune_batches = 3;    // consecutive clean batches required
    int min_spacing = 3;
    long max_iters = 200000;

    void validate() const;
};

// =============================================================================
// Pipeline state
// =============================================================================

struct Candidate {
    std::vector<double> rset;
    double abe = 0.0;     // ranking score from the stage that produced it
    Codebook codebook;    // always consistent with rset
};

struct TrainedModel {
    ArchitectureSpec arch;
    std::vector<double> rset;
    Codebook codebook;
    InputMapKind input_map = InputMapKind::RowMajor;
    int image_width = kGlyphDim;
    int image_height = kGlyphDim;
    ValueRange value_range;
    std::uint64_t seed = 0;
    long iterations = 0;
    double final_abe = 0.0;
    bool converged = false;

    Network network() const { return build_network(arch, rset); }
    InputMap map() const {
        return InputMap::make(input_map, arch, image_width, image_height);
    }
};

// A deformation sampler: either one fixed parameter set for every sample
// (identity, fixed 12% noise) or a distribution to draw from.
struct Deformer {
    std::optional<DeformationParams> fixed;
    DeformationDistribution dist;

    static Deformer identity() { return Deformer{DeformationParams{}, {}}; }
    static Deformer fixed_noise(double p) {
        DeformationParams dp;
        dp.noise_p = p;
        return Deformer{dp, {}};
    }
    static Deformer from(const DeformationDistribution& d) { return Deformer{std::nullopt, d}; }

    DeformationParams sample(Rng& rng) const {
        return fixed ? *fixed : sample_params(dist, rng);
    }
};

// =============================================================================
// Operations
// =============================================================================

// Every resistor i.i.d. log-uniform over [r_min, r_max]; output resistors
// honor the range's output_bias.
std::vector<double> random_rset(const ArchitectureSpec& arch, const ValueRange& range,
                                Rng& rng);
double random_resistance(const ValueRange& range, Rng& rng);

// Per-gene resampler that knows which genome positions are output resistors.
class GeneSampler {
public:
    GeneSampler(const ArchitectureSpec& arch, const ValueRange& range);
    double sample(std::size_t gene, Rng& rng) const;
    const ValueRange& range() const { return range_; }

private:
    ValueRange range_;
    std::vector<bool> is_output_;
};

// Average bit error per character, in bits: the mean Hamming distance between
// the network's outputs on deformed glyphs and the character's main code,
// over 26 characters x trials_per_char samples. Range [0, N_o].
double abe(const Network& net, const GlyphSet& glyphs, const Codebook& cb,
           const Deformer& deformer, int trials_per_char, const InputMap& map, Rng& rng);

// Same samples decomposed per output position; the entries sum to the abe
// value for the identical stream.
std::vector<double> per_output_bit_error(const Network& net, const GlyphSet& glyphs,
                                         const Codebook& cb, const Deformer& deformer,
                                         int trials_per_char, const InputMap& map,
                                         Rng& rng);

// Child = a[0..i) ++ b[i..j) ++ a[j..L) with 0 <= i <= j <= L drawn uniformly.
std::vector<double> two_point_crossover(const std::vector<double>& a,
                                        const std::vector<double>& b, Rng& rng);
std::vector<double> two_point_crossover(const std::vector<double>& a,
                                        const std::vector<double>& b, std::size_t i,
                                        std::size_t j);

// Draws random genomes until pool_target of them produce 26 distinct main
// codes, ranks that pool by ABE under fixed salt-and-pepper noise, and keeps
// the best `keep`, sorted ascending by ABE (stable in draw order).
std::vector<Candidate> selection_stage(const ArchitectureSpec& arch, const GlyphSet& glyphs,
                                       const SelectionConfig& cfg, const ValueRange& range,
                                       const InputMap& map, std::uint64_t master_seed,
                                       unsigned threads = 1, std::ostream* log = nullptr);

// One generation of two-point crossover over uniformly drawn ordered pairs of
// distinct parents; children are ranked by the same noise ABE (parents
// excluded) and the best `keep` survive.
std::vector<Candidate> genetic_stage(const std::vector<Candidate>& parents,
                                     const ArchitectureSpec& arch, const GlyphSet& glyphs,
                                     const GeneticConfig& cfg, const SelectionConfig& noise_cfg,
                                     const InputMap& map, std::uint64_t master_seed,
                                     unsigned threads = 1, std::ostream* log = nullptr);

// Per-move record, exposed so tests can assert the locality and acceptance
// properties directly.
struct RefineMove {
    long iter = 0;
    std::vector<int> targets;           // output trees chosen for resampling
    std::vector<std::size_t> changed;   // gene indices actually resampled
    long incumbent_errors = 0;          // on the move's batch
    long proposal_errors = 0;
    bool accepted = false;
};

// Localized random hill descent: measure per-output bit errors on a fresh
// deformed batch, resample genes inside the worst outputs' trees, accept the
// move iff (ABE, -min_spacing) does not worsen lexicographically on that same
// batch. Converged when ABE stays 0 over immune_batches consecutive fresh
// batches and the codebook spacing reaches min_spacing.
TrainedModel refine_stage(const Candidate& start, const ArchitectureSpec& arch,
                          const GlyphSet& glyphs, const RefineConfig& cfg,
                          const ValueRange& range, const InputMap& map,
                          std::uint64_t master_seed, std::uint64_t candidate_index = 0,
                          std::ostream* log = nullptr,
                          std::vector<RefineMove>* trace = nullptr);

struct TrainConfig {
    ArchitectureSpec arch;
    ValueRange value_range;
    InputMapKind input_map = InputMapKind::RowMajor;
    SelectionConfig selection;
    GeneticConfig genetic;
    RefineConfig refine;
};

// Full pipeline: selection -> genetic -> refine on each survivor in rank
// order, returning the first refined model that converges (or the best final
// ABE if none do).
TrainedModel train(const TrainConfig& cfg, const GlyphSet& glyphs,
                   std::uint64_t master_seed, unsigned threads = 1,
                   std::ostream* log = nullptr);

}  // namespace memnet
