#include "memnet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace memnet {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key()))
            throw ConfigError("config: unknown key '" + path + it.key() + "'");
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

SampleMode mode_from_string(const std::string& s, const std::string& path) {
    if (s == "truncated-normal") return SampleMode::TruncatedNormal;
    if (s == "uniform-range") return SampleMode::UniformRange;
    throw ConfigError("config: " + path +
                      "mode must be 'truncated-normal' or 'uniform-range', got '" + s + "'");
}

DeformationDistribution parse_dist(const json& j, const std::string& path) {
    reject_unknown(j, path,
                   {"sigma_noise", "sigma_rot_deg", "sigma_scale", "sigma_shift_px", "mode",
                    "max_shift_px"});
    DeformationDistribution d;
    get_if(j, "sigma_noise", d.sigma_noise);
    get_if(j, "sigma_rot_deg", d.sigma_rot_deg);
    get_if(j, "sigma_scale", d.sigma_scale);
    get_if(j, "sigma_shift_px", d.sigma_shift_px);
    if (j.contains("mode")) d.mode = mode_from_string(j.at("mode").get<std::string>(), path);
    if (j.contains("max_shift_px")) d.max_shift_px = j.at("max_shift_px").get<double>();
    d.validate();
    return d;
}

}  // namespace

RunConfig run_config_from_text(const std::string& text, const std::string& name) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(name + ": " + e.what());
    }

    try {
        reject_unknown(j, "", {"seed", "glyphs", "arch", "value_range", "input_map",
                               "selection", "genetic", "refine", "test_protocol"});

        RunConfig cfg;
        get_if(j, "seed", cfg.seed);
        get_if(j, "glyphs", cfg.glyphs);

        if (!j.contains("arch")) throw ConfigError("config: missing required key 'arch'");
        {
            const json& a = j.at("arch");
            reject_unknown(a, "arch.", {"n_inputs", "fan_ins", "logic_high", "threshold"});
            if (!a.contains("n_inputs"))
                throw ConfigError("config: missing required key 'arch.n_inputs'");
            if (!a.contains("fan_ins"))
                throw ConfigError("config: missing required key 'arch.fan_ins'");
            cfg.train.arch.n_inputs = a.at("n_inputs").get<int>();
            cfg.train.arch.fan_ins = a.at("fan_ins").get<std::vector<int>>();
            get_if(a, "logic_high", cfg.train.arch.logic_high);
            get_if(a, "threshold", cfg.train.arch.threshold);
            cfg.train.arch.validate();
        }

        if (j.contains("value_range")) {
            const json& v = j.at("value_range");
            reject_unknown(v, "value_range.", {"r_min", "r_max", "output_bias"});
            get_if(v, "r_min", cfg.train.value_range.r_min);
            get_if(v, "r_max", cfg.train.value_range.r_max);
            get_if(v, "output_bias", cfg.train.value_range.output_bias);
            cfg.train.value_range.validate();
        }

        if (j.contains("input_map"))
            cfg.train.input_map =
                input_map_kind_from_string(j.at("input_map").get<std::string>());

        if (j.contains("selection")) {
            const json& s = j.at("selection");
            reject_unknown(s, "selection.",
                           {"pool_target", "keep", "noise_p", "trials_per_char", "sample_cap"});
            get_if(s, "pool_target", cfg.train.selection.pool_target);
            get_if(s, "keep", cfg.train.selection.keep);
            get_if(s, "noise_p", cfg.train.selection.noise_p);
            get_if(s, "trials_per_char", cfg.train.selection.trials_per_char);
            get_if(s, "sample_cap", cfg.train.selection.sample_cap);
            cfg.train.selection.validate();
        }

        if (j.contains("genetic")) {
            const json& g = j.at("genetic");
            reject_unknown(g, "genetic.", {"offspring", "keep"});
            get_if(g, "offspring", cfg.train.genetic.offspring);
            get_if(g, "keep", cfg.train.genetic.keep);
            cfg.train.genetic.validate();
        }

        if (j.contains("refine")) {
            const json& r = j.at("refine");
            reject_unknown(r, "refine.",
                           {"train_dist", "batch", "resample_prob", "immune_batch",
                            "immune_batches", "min_spacing", "max_iters"});
            if (r.contains("train_dist"))
                cfg.train.refine.train_dist = parse_dist(r.at("train_dist"), "refine.train_dist.");
            get_if(r, "batch", cfg.train.refine.batch);
            get_if(r, "resample_prob", cfg.train.refine.resample_prob);
            get_if(r, "immune_batch", cfg.train.refine.immune_batch);
            get_if(r, "immune_batches", cfg.train.refine.immune_batches);
            get_if(r, "min_spacing", cfg.train.refine.min_spacing);
            get_if(r, "max_iters", cfg.train.refine.max_iters);
            cfg.train.refine.validate();
        }

        if (j.contains("test_protocol")) {
            const json& t = j.at("test_protocol");
            reject_unknown(t, "test_protocol.", {"dist", "n_sets"});
            if (t.contains("dist"))
                cfg.test_protocol.dist = parse_dist(t.at("dist"), "test_protocol.dist.");
            get_if(t, "n_sets", cfg.test_protocol.n_sets);
            cfg.test_protocol.validate();
        }

        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(name + ": " + e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_config_from_text(buf.str(), path);
}

}  // namespace memnet
