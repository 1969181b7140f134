#include "memnet/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "memnet/parallel.hpp"

namespace memnet {

void SelectionConfig::validate() const {
    if (pool_target <= 0) throw ConfigError("selection.pool_target must be positive");
    if (keep <= 0 || keep > pool_target)
        throw ConfigError("selection.keep must be in [1, pool_target]");
    if (noise_p < 0 || noise_p > 1) throw ConfigError("selection.noise_p outside [0,1]");
    if (trials_per_char <= 0) throw ConfigError("selection.trials_per_char must be positive");
    if (sample_cap < pool_target)
        throw ConfigError("selection.sample_cap must be >= pool_target");
}

void GeneticConfig::validate() const {
    if (offspring <= 0) throw ConfigError("genetic.offspring must be positive");
    if (keep <= 0 || keep > offspring)
        throw ConfigError("genetic.keep must be in [1, offspring]");
}

void RefineConfig::validate() const {
    train_dist.validate();
    if (batch <= 0) throw ConfigError("refine.batch must be positive");
    if (resample_prob <= 0 || resample_prob > 1)
        throw ConfigError("refine.resample_prob must be in (0,1]");
    if (immune_batch <= 0) throw ConfigError("refine.immune_batch must be positive");
    if (immune_batches <= 0) throw ConfigError("refine.immune_batches must be positive");
    if (min_spacing < 1) throw ConfigError("refine.min_spacing must be >= 1");
    if (max_iters <= 0) throw ConfigError("refine.max_iters must be positive");
}

double random_resistance(const ValueRange& range, Rng& rng) {
    std::uniform_real_distribution<double> u(std::log(range.r_min), std::log(range.r_max));
    return std::exp(u(rng));
}

GeneSampler::GeneSampler(const ArchitectureSpec& arch, const ValueRange& range)
    : range_(range) {
    range_.validate();
    auto sizes = layer_sizes(arch);
    is_output_.reserve(rset_len(arch));
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        int fan = arch.fan_ins[k];
        for (int c = 0; c < sizes[k]; ++c) {
            for (int i = 0; i < fan; ++i) is_output_.push_back(false);
            is_output_.push_back(true);
        }
    }
}

double GeneSampler::sample(std::size_t gene, Rng& rng) const {
    double lo = is_output_[gene] ? range_.output_min() : range_.r_min;
    std::uniform_real_distribution<double> u(std::log(lo), std::log(range_.r_max));
    return std::exp(u(rng));
}

std::vector<double> random_rset(const ArchitectureSpec& arch, const ValueRange& range,
                                Rng& rng) {
    GeneSampler sampler(arch, range);
    std::size_t len = rset_len(arch);
    std::vector<double> rset(len);
    for (std::size_t g = 0; g < len; ++g) rset[g] = sampler.sample(g, rng);
    return rset;
}

// -----------------------------------------------------------------------------
// Batch evaluation
// -----------------------------------------------------------------------------

namespace {

struct Sample {
    int chr;
    std::vector<std::uint8_t> lines;  // network input-line order
};

std::vector<Sample> draw_batch(const GlyphSet& glyphs, const Deformer& deformer,
                               int trials_per_char, const InputMap& map, Rng& rng) {
    std::vector<Sample> batch;
    batch.reserve(static_cast<std::size_t>(kNumGlyphs) * trials_per_char);
    for (int g = 0; g < kNumGlyphs; ++g) {
        for (int t = 0; t < trials_per_char; ++t) {
            DeformationParams params = deformer.sample(rng);
            Bitmap bmp = deform(glyphs.glyph(g), params, rng);
            batch.push_back({g, map.apply(bitmap_to_inputs(bmp))});
        }
    }
    return batch;
}

// Integer bit-error counts per output position over a batch.
std::vector<long> count_errors(const Network& net, const Codebook& cb,
                               const std::vector<Sample>& batch) {
    std::vector<long> counts(net.sizes().back(), 0);
    for (const Sample& s : batch) {
        Code out = net.forward(s.lines);
        const Code& want = cb.main_codes[s.chr];
        for (std::size_t k = 0; k < out.size(); ++k)
            if (out[k] != want[k]) ++counts[k];
    }
    return counts;
}

long total_of(const std::vector<long>& counts) {
    long t = 0;
    for (long c : counts) t += c;
    return t;
}

}  // namespace

std::vector<double> per_output_bit_error(const Network& net, const GlyphSet& glyphs,
                                         const Codebook& cb, const Deformer& deformer,
                                         int trials_per_char, const InputMap& map,
                                         Rng& rng) {
    if (trials_per_char < 1)
        throw ContractError("per_output_bit_error: trials_per_char must be >= 1");
    auto batch = draw_batch(glyphs, deformer, trials_per_char, map, rng);
    auto counts = count_errors(net, cb, batch);
    double denom = static_cast<double>(batch.size());
    std::vector<double> rates(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) rates[k] = counts[k] / denom;
    return rates;
}

double abe(const Network& net, const GlyphSet& glyphs, const Codebook& cb,
           const Deformer& deformer, int trials_per_char, const InputMap& map, Rng& rng) {
    // Sum of the per-output decomposition, so the two views agree exactly.
    auto rates = per_output_bit_error(net, glyphs, cb, deformer, trials_per_char, map, rng);
    double sum = 0.0;
    for (double r : rates) sum += r;
    return sum;
}

// -----------------------------------------------------------------------------
// Selection
// -----------------------------------------------------------------------------

std::vector<Candidate> selection_stage(const ArchitectureSpec& arch, const GlyphSet& glyphs,
                                       const SelectionConfig& cfg, const ValueRange& range,
                                       const InputMap& map, std::uint64_t master_seed,
                                       unsigned threads, std::ostream* log) {
    cfg.validate();
    range.validate();
    arch.validate();

    std::vector<Candidate> pool;
    pool.reserve(cfg.pool_target);
    long drawn = 0;

    // Draws are indexed, evaluated in windows (parallelizable), and scanned in
    // index order, so the pool is identical for any worker count.
    const long window = std::max<long>(256, static_cast<long>(threads) * 64);
    while (static_cast<int>(pool.size()) < cfg.pool_target && drawn < cfg.sample_cap) {
        long lo = drawn;
        long hi = std::min<long>(lo + window, cfg.sample_cap);
        std::vector<std::optional<Candidate>> results(hi - lo);
        parallel_for(static_cast<std::size_t>(hi - lo), threads, [&](std::size_t w) {
            Rng rng = make_stream(master_seed, "select.draw", lo + static_cast<long>(w));
            Candidate cand;
            cand.rset = random_rset(arch, range, rng);
            Network net = build_network(arch, cand.rset);
            cand.codebook = extract_main_codes(net, glyphs, map);
            if (cand.codebook.all_unique()) results[w] = std::move(cand);
        });
        for (long i = lo; i < hi && static_cast<int>(pool.size()) < cfg.pool_target; ++i) {
            drawn = i + 1;
            if (results[i - lo]) pool.push_back(std::move(*results[i - lo]));
        }
        if (static_cast<int>(pool.size()) < cfg.pool_target && drawn >= cfg.sample_cap) break;
    }

    if (static_cast<int>(pool.size()) < cfg.pool_target) {
        double rate = drawn ? static_cast<double>(pool.size()) / drawn : 0.0;
        throw StageError("selection",
                         "selection starvation: " + std::to_string(pool.size()) + "/" +
                             std::to_string(cfg.pool_target) + " unique-code genomes after " +
                             std::to_string(drawn) + " draws (pass rate " +
                             std::to_string(rate) + ")");
    }

    Deformer noise = Deformer::fixed_noise(cfg.noise_p);
    parallel_for(pool.size(), threads, [&](std::size_t p) {
        Rng rng = make_stream(master_seed, "select.abe", p);
        Network net = build_network(arch, pool[p].rset);
        pool[p].abe = abe(net, glyphs, pool[p].codebook, noise, cfg.trials_per_char, map, rng);
    });

    std::vector<int> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return pool[a].abe < pool[b].abe; });

    std::vector<Candidate> kept;
    kept.reserve(cfg.keep);
    for (int i = 0; i < cfg.keep; ++i) kept.push_back(std::move(pool[order[i]]));
    if (log) {
        *log << "stage=selection drawn=" << drawn << " pool=" << cfg.pool_target
             << " kept=" << cfg.keep;
        for (const auto& c : kept) *log << " abe=" << c.abe;
        *log << " seed=" << master_seed << "\n";
    }
    return kept;
}

// -----------------------------------------------------------------------------
// Genetic
// -----------------------------------------------------------------------------

std::vector<double> two_point_crossover(const std::vector<double>& a,
                                        const std::vector<double>& b, std::size_t i,
                                        std::size_t j) {
    if (a.size() != b.size()) throw ContractError("two_point_crossover: genome lengths differ");
    if (i > j || j > a.size())
        throw ContractError("two_point_crossover: need 0 <= i <= j <= genome length");
    std::vector<double> child = a;
    for (std::size_t k = i; k < j; ++k) child[k] = b[k];
    return child;
}

std::vector<double> two_point_crossover(const std::vector<double>& a,
                                        const std::vector<double>& b, Rng& rng) {
    std::uniform_int_distribution<std::size_t> u(0, a.size());
    std::size_t i = u(rng);
    std::size_t j = u(rng);
    if (i > j) std::swap(i, j);
    return two_point_crossover(a, b, i, j);
}

std::vector<Candidate> genetic_stage(const std::vector<Candidate>& parents,
                                     const ArchitectureSpec& arch, const GlyphSet& glyphs,
                                     const GeneticConfig& cfg, const SelectionConfig& noise_cfg,
                                     const InputMap& map, std::uint64_t master_seed,
                                     unsigned threads, std::ostream* log) {
    cfg.validate();
    if (parents.size() < 2) throw ContractError("genetic_stage: need at least 2 parents");
    for (const auto& p : parents)
        if (p.rset.size() != parents[0].rset.size())
            throw ContractError("genetic_stage: parent genome lengths differ");

    Deformer noise = Deformer::fixed_noise(noise_cfg.noise_p);
    std::vector<Candidate> children(cfg.offspring);
    parallel_for(static_cast<std::size_t>(cfg.offspring), threads, [&](std::size_t i) {
        Rng rng = make_stream(master_seed, "genetic.child", i);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(parents.size()) - 1);
        int pa = pick(rng);
        int pb = pick(rng);
        while (pb == pa) pb = pick(rng);
        Candidate child;
        child.rset = two_point_crossover(parents[pa].rset, parents[pb].rset, rng);
        Network net = build_network(arch, child.rset);
        child.codebook = extract_main_codes(net, glyphs, map);
        child.abe = abe(net, glyphs, child.codebook, noise, noise_cfg.trials_per_char, map, rng);
        children[i] = std::move(child);
    });

    std::vector<int> order(children.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return children[a].abe < children[b].abe; });
    std::vector<Candidate> kept;
    kept.reserve(cfg.keep);
    for (int i = 0; i < cfg.keep; ++i) kept.push_back(std::move(children[order[i]]));
    if (log) {
        *log << "stage=genetic offspring=" << cfg.offspring << " kept=" << cfg.keep;
        for (const auto& c : kept) *log << " abe=" << c.abe;
        *log << " seed=" << master_seed << "\n";
    }
    return kept;
}

// -----------------------------------------------------------------------------
// Refine
// -----------------------------------------------------------------------------

namespace {

struct Incumbent {
    std::vector<double> rset;
    Network net;
    Codebook codebook;
    int spacing = 0;
};

Incumbent make_incumbent(const ArchitectureSpec& arch, std::vector<double> rset,
                         const GlyphSet& glyphs, const InputMap& map) {
    Incumbent inc;
    inc.rset = std::move(rset);
    inc.net = build_network(arch, inc.rset);
    inc.codebook = extract_main_codes(inc.net, glyphs, map);
    inc.spacing = min_pairwise_distance(inc.codebook);
    return inc;
}

// Lexicographic (total errors, -spacing): true when `a` is no worse than `b`.
bool not_worse(long err_a, int spacing_a, long err_b, int spacing_b) {
    if (err_a != err_b) return err_a < err_b;
    return spacing_a >= spacing_b;
}

}  // namespace

TrainedModel refine_stage(const Candidate& start, const ArchitectureSpec& arch,
                          const GlyphSet& glyphs, const RefineConfig& cfg,
                          const ValueRange& range, const InputMap& map,
                          std::uint64_t master_seed, std::uint64_t candidate_index,
                          std::ostream* log, std::vector<RefineMove>* trace) {
    cfg.validate();
    range.validate();
    std::uint64_t seed = stream_seed(master_seed, "refine", candidate_index);
    Rng rng(seed);
    Deformer deformer = Deformer::from(cfg.train_dist);
    GeneSampler sampler(arch, range);

    int n_out = arch.n_outputs();
    std::vector<std::vector<std::size_t>> tree_genes(n_out);
    for (int k = 0; k < n_out; ++k) tree_genes[k] = output_tree_gene_indices(arch, k);

    Incumbent inc = make_incumbent(arch, start.rset, glyphs, map);

    auto verify_immune = [&]() -> bool {
        for (int b = 0; b < cfg.immune_batches; ++b) {
            auto batch = draw_batch(glyphs, deformer, cfg.immune_batch, map, rng);
            if (total_of(count_errors(inc.net, inc.codebook, batch)) != 0) return false;
        }
        return true;
    };

    long iter = 0;
    bool converged = false;

    while (iter < cfg.max_iters) {
        ++iter;
        auto batch = draw_batch(glyphs, deformer, cfg.batch, map, rng);
        auto counts = count_errors(inc.net, inc.codebook, batch);
        long cur_err = total_of(counts);

        if (cur_err == 0 && inc.spacing >= cfg.min_spacing) {
            if (verify_immune()) {
                converged = true;
                break;
            }
            if (log)
                *log << "stage=refine cand=" << candidate_index << " iter=" << iter
                     << " event=immunity-miss spacing=" << inc.spacing << " seed=" << seed
                     << "\n";
            continue;
        }

        // Targets: the argmax-error outputs; with a perfectly clean batch the
        // deficit is spacing, so jolt one tree where a minimum-distance code
        // pair agrees (flipping an agreeing bit can only grow that distance).
        std::vector<int> targets;
        if (cur_err > 0) {
            long worst = *std::max_element(counts.begin(), counts.end());
            for (int k = 0; k < n_out; ++k)
                if (counts[k] == worst) targets.push_back(k);
        } else {
            int d = inc.spacing;
            int pa = -1, pb = -1;
            for (int i = 0; i < inc.codebook.n_codes() && pa < 0; ++i)
                for (int j = i + 1; j < inc.codebook.n_codes(); ++j)
                    if (hamming(inc.codebook.main_codes[i], inc.codebook.main_codes[j]) == d) {
                        pa = i;
                        pb = j;
                        break;
                    }
            std::vector<int> agreeing;
            for (int k = 0; k < n_out; ++k)
                if (inc.codebook.main_codes[pa][k] == inc.codebook.main_codes[pb][k])
                    agreeing.push_back(k);
            std::uniform_int_distribution<std::size_t> pick(0, agreeing.size() - 1);
            targets.push_back(agreeing[pick(rng)]);
        }

        // Propose: resample each gene in the target trees with resample_prob.
        std::vector<double> prop = inc.rset;
        std::vector<std::size_t> changed;
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int t : targets) {
            for (std::size_t g : tree_genes[t]) {
                if (u01(rng) < cfg.resample_prob) {
                    prop[g] = sampler.sample(g, rng);
                    changed.push_back(g);
                }
            }
        }
        if (changed.empty()) {
            const auto& genes = tree_genes[targets[0]];
            std::uniform_int_distribution<std::size_t> pick(0, genes.size() - 1);
            std::size_t g = genes[pick(rng)];
            prop[g] = sampler.sample(g, rng);
            changed.push_back(g);
        }

        Incumbent cand = make_incumbent(arch, std::move(prop), glyphs, map);
        long cand_err = total_of(count_errors(cand.net, cand.codebook, batch));

        bool accepted = not_worse(cand_err, cand.spacing, cur_err, inc.spacing);
        if (trace)
            trace->push_back({iter, targets, changed, cur_err, cand_err, accepted});
        if (accepted) {
            inc = std::move(cand);
            if (log)
                *log << "stage=refine cand=" << candidate_index << " iter=" << iter
                     << " abe=" << static_cast<double>(cand_err) / batch.size()
                     << " spacing=" << inc.spacing << " seed=" << seed << "\n";
        }
    }

    TrainedModel model;
    model.arch = arch;
    model.rset = inc.rset;
    model.codebook = inc.codebook;
    model.input_map = map.kind();
    model.image_width = glyphs.glyph(0).width;
    model.image_height = glyphs.glyph(0).height;
    model.value_range = range;
    model.seed = master_seed;
    model.iterations = iter;
    model.converged = converged;
    {
        Rng final_rng = make_stream(master_seed, "refine.final", candidate_index);
        model.final_abe = abe(inc.net, glyphs, inc.codebook, deformer, cfg.immune_batch, map,
                              final_rng);
    }
    if (log)
        *log << "stage=refine cand=" << candidate_index << " iter=" << iter
             << " done converged=" << (converged ? 1 : 0) << " final_abe=" << model.final_abe
             << " spacing=" << inc.spacing << " seed=" << seed << "\n";
    return model;
}

// -----------------------------------------------------------------------------
// Full pipeline
// -----------------------------------------------------------------------------

TrainedModel train(const TrainConfig& cfg, const GlyphSet& glyphs,
                   std::uint64_t master_seed, unsigned threads, std::ostream* log) {
    cfg.arch.validate();
    InputMap map = InputMap::make(cfg.input_map, cfg.arch, glyphs.glyph(0).width,
                                  glyphs.glyph(0).height);

    auto selected = selection_stage(cfg.arch, glyphs, cfg.selection, cfg.value_range, map,
                                    master_seed, threads, log);
    auto parents = genetic_stage(selected, cfg.arch, glyphs, cfg.genetic, cfg.selection, map,
                                 master_seed, threads, log);

    std::vector<TrainedModel> refined;
    for (std::size_t i = 0; i < parents.size(); ++i) {
        TrainedModel m = refine_stage(parents[i], cfg.arch, glyphs, cfg.refine,
                                      cfg.value_range, map, master_seed, i, log);
        if (m.converged) return m;
        refined.push_back(std::move(m));
    }

    // None converged: compare the survivors on one common fresh batch.
    Deformer deformer = Deformer::from(cfg.refine.train_dist);
    std::size_t best = 0;
    double best_abe = -1.0;
    for (std::size_t i = 0; i < refined.size(); ++i) {
        Rng rng = make_stream(master_seed, "train.finalcmp", 0);
        Network net = build_network(cfg.arch, refined[i].rset);
        double a = abe(net, glyphs, refined[i].codebook, deformer, cfg.refine.immune_batch,
                       map, rng);
        refined[i].final_abe = a;
        if (best_abe < 0 || a < best_abe) {
            best_abe = a;
            best = i;
        }
    }
    return refined[best];
}

}  // namespace memnet
