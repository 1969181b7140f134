// memnet command line: train models, evaluate them against the deformation
// protocol, sweep fault rates, export netlists and manage glyph sets.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memnet/config.hpp"
#include "memnet/netlist.hpp"
#include "memnet/parallel.hpp"

namespace fs = std::filesystem;
using namespace memnet;

namespace {

// Exit codes, also documented in the README.
constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNotConverged = 3;
constexpr int kIoError = 4;
constexpr int kSelfCheckError = 5;

// Collects output files under --out and refuses to clobber without --force.
class OutputDir {
public:
    OutputDir(const std::string& dir, bool force) : dir_(dir), force_(force) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir);
    }

    fs::path path(const std::string& name) const { return dir_ / name; }

    void write(const std::string& name, const std::string& content) {
        fs::path p = path(name);
        if (fs::exists(p) && !force_)
            throw IoError(p.string() + " exists; pass --force to overwrite");
        std::ofstream out(p, std::ios::binary);
        if (!out) throw IoError("cannot write " + p.string());
        out << content;
        if (!out) throw IoError("write failed: " + p.string());
        written_.push_back(name);
    }

    void finish() {
        std::ostringstream os;
        for (const auto& n : written_) os << n << "\n";
        std::ofstream out(dir_ / "manifest.txt", std::ios::binary);
        out << os.str();
    }

private:
    fs::path dir_;
    bool force_;
    std::vector<std::string> written_;
};

int cmd_train(const std::string& config_path, std::uint64_t seed, bool seed_set,
              const std::string& out_dir, bool force, unsigned threads) {
    RunConfig cfg = load_run_config(config_path);
    if (seed_set) cfg.seed = seed;
    GlyphSet glyphs = load_glyphs(cfg.glyphs);

    OutputDir out(out_dir, force);
    std::ostringstream log;
    TrainedModel model = train(cfg.train, glyphs, cfg.seed, threads, &log);
    model.seed = cfg.seed;

    out.write("model.mmn", model_to_text(model));
    out.write("train.log", log.str());
    out.finish();

    std::cout << "converged " << (model.converged ? "yes" : "no") << "\n"
              << "iterations " << model.iterations << "\n"
              << "final_abe " << model.final_abe << "\n"
              << "min_spacing " << min_pairwise_distance(model.codebook) << "\n"
              << "model " << out.path("model.mmn").string() << "\n";
    return model.converged ? kOk : kNotConverged;
}

int cmd_eval(const std::string& model_path, const std::string& config_path,
             std::uint64_t seed, long n_sets_override, const std::string& out_dir,
             bool force, unsigned threads) {
    TrainedModel model = load_model(model_path);
    RunConfig cfg = load_run_config(config_path);
    if (n_sets_override > 0) cfg.test_protocol.n_sets = n_sets_override;
    GlyphSet glyphs = load_glyphs(cfg.glyphs);

    EvalReport rep = evaluate(model, glyphs, cfg.test_protocol, stream_seed(seed, "eval", 0),
                              threads);

    OutputDir out(out_dir, force);
    out.write("report.txt", report_text(rep));
    out.write("report.csv", report_csv(rep));
    out.finish();

    std::cout << "accuracy " << rep.accuracy << "\n"
              << "abe " << rep.abe << "\n"
              << "max_bit_error " << rep.max_bit_error << "\n"
              << "rejects " << rep.rejects << "\n";
    return kOk;
}

int cmd_fault_sweep(const std::string& model_path, const std::string& config_path,
                    const std::string& rates_csv, int reps, const std::string& kind_str,
                    std::uint64_t seed, const std::string& out_dir, bool force,
                    unsigned threads) {
    TrainedModel model = load_model(model_path);
    RunConfig cfg = load_run_config(config_path);
    GlyphSet glyphs = load_glyphs(cfg.glyphs);

    std::vector<double> rates;
    std::istringstream rs(rates_csv);
    std::string tok;
    while (std::getline(rs, tok, ',')) {
        try {
            rates.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("bad --rates entry '" + tok + "'");
        }
    }
    if (rates.empty()) throw ConfigError("--rates is empty");
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (rates[i] < rates[i - 1]) throw ConfigError("--rates must be sorted ascending");

    auto rows = fault_sweep(model, glyphs, cfg.test_protocol,
                            fault_kind_from_string(kind_str), rates, reps, seed, threads);
    std::string csv = fault_sweep_csv(rows);

    OutputDir out(out_dir, force);
    out.write("fault_sweep.csv", csv);
    out.finish();
    std::cout << csv;
    return kOk;
}

int cmd_export_netlist(const std::string& model_path, const std::string& out_dir,
                       bool force) {
    TrainedModel model = load_model(model_path);
    Netlist nl = export_netlist(model.arch, model.rset);

    // Self-check before anything is written: re-derive node voltages from the
    // emitted text on a spread of inputs and require 1e-9 agreement.
    Network net = model.network();
    ParsedNetlist parsed = parse_netlist(nl.text, "export");
    Rng rng = make_stream(model.seed, "netlist.selfcheck");
    std::uniform_int_distribution<int> coin(0, 1);
    for (int trial = 0; trial < 16; ++trial) {
        std::vector<std::uint8_t> bits(model.arch.n_inputs, 0);
        if (trial == 1)
            bits.assign(model.arch.n_inputs, 1);
        else if (trial > 1)
            for (auto& b : bits) b = static_cast<std::uint8_t>(coin(rng));
        double err = netlist_selfcheck(parsed, net, bits);
        if (err > 1e-9) {
            std::cerr << "netlist self-check failed: relative error " << err << "\n";
            return kSelfCheckError;
        }
    }

    OutputDir out(out_dir, force);
    out.write("model.cir", nl.text);
    out.finish();
    std::cout << "resistors " << nl.resistor_count << "\n"
              << "inverters " << nl.inverter_count << "\n"
              << "netlist " << out.path("model.cir").string() << "\n";
    return kOk;
}

int cmd_glyphs(const std::string& export_dir, const std::string& validate_dir, bool force) {
    if (!export_dir.empty()) {
        OutputDir out(export_dir, force);
        GlyphSet set = builtin_glyphs();
        for (int g = 0; g < kNumGlyphs; ++g)
            out.write(std::string(1, static_cast<char>('A' + g)) + ".pbm",
                      to_pbm(set.glyphs[g]));
        out.finish();
        std::cout << "exported 26 glyphs to " << export_dir << "\n";
        return kOk;
    }
    GlyphSet set = load_glyphs(validate_dir);
    std::cout << "validated 26 glyphs in " << validate_dir << " ("
              << set.glyphs[0].width << "x" << set.glyphs[0].height << ")\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memnet: crossover-free resistive memory network trainer and simulator"};
    app.require_subcommand(1);

    unsigned threads = 1;
    app.add_option("--threads", threads, "worker cap; never changes results")
        ->capture_default_str();

    std::string config_path, model_path, out_dir;
    std::uint64_t seed = 0;
    bool force = false;

    auto* tr = app.add_subcommand("train", "run the evolutionary pipeline");
    tr->add_option("--config", config_path, "run configuration file")->required();
    auto* tr_seed = tr->add_option("--seed", seed, "master seed (overrides config)");
    tr->add_option("--out", out_dir, "output directory")->required();
    tr->add_flag("--force", force, "overwrite existing outputs");

    long n_sets_override = 0;
    auto* ev = app.add_subcommand("eval", "evaluate a model against the test protocol");
    ev->add_option("--model", model_path, "model file")->required();
    ev->add_option("--config", config_path, "run configuration file")->required();
    ev->add_option("--seed", seed, "evaluation seed")->capture_default_str();
    ev->add_option("--n-sets", n_sets_override, "override protocol n_sets");
    ev->add_option("--out", out_dir, "output directory")->required();
    ev->add_flag("--force", force, "overwrite existing outputs");

    std::string rates_csv = "0", fault_kind = "open";
    int reps = 5;
    auto* fsw = app.add_subcommand("fault-sweep", "accuracy vs fault rate");
    fsw->add_option("--model", model_path)->required();
    fsw->add_option("--config", config_path)->required();
    fsw->add_option("--rates", rates_csv, "comma separated, ascending")->required();
    fsw->add_option("--reps", reps, "fault draws per rate")->capture_default_str();
    fsw->add_option("--kind", fault_kind, "open | short | random-revalue")
        ->capture_default_str();
    fsw->add_option("--seed", seed)->capture_default_str();
    fsw->add_option("--out", out_dir)->required();
    fsw->add_flag("--force", force);

    auto* nx = app.add_subcommand("export-netlist", "emit a SPICE-like netlist");
    nx->add_option("--model", model_path)->required();
    nx->add_option("--out", out_dir)->required();
    nx->add_flag("--force", force);

    std::string glyph_export, glyph_validate;
    auto* gl = app.add_subcommand("glyphs", "export or validate glyph sets");
    auto* opt_ex = gl->add_option("--export", glyph_export, "write built-in set as P1 files");
    auto* opt_va = gl->add_option("--validate", glyph_validate, "check a user set");
    opt_ex->excludes(opt_va);
    gl->add_flag("--force", force);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (tr->parsed())
            return cmd_train(config_path, seed, tr_seed->count() > 0, out_dir, force, threads);
        if (ev->parsed())
            return cmd_eval(model_path, config_path, seed, n_sets_override, out_dir, force,
                            threads);
        if (fsw->parsed())
            return cmd_fault_sweep(model_path, config_path, rates_csv, reps, fault_kind, seed,
                                   out_dir, force, threads);
        if (nx->parsed()) return cmd_export_netlist(model_path, out_dir, force);
        if (gl->parsed()) {
            if (glyph_export.empty() && glyph_validate.empty())
                throw ConfigError("glyphs: pass --export DIR or --validate DIR");
            return cmd_glyphs(glyph_export, glyph_validate, force);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
