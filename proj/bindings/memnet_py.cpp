#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "memnet/config.hpp"
#include "memnet/netlist.hpp"

namespace py = pybind11;
using namespace memnet;

namespace {

Bitmap bitmap_from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw ContractError("bitmap rows must not be empty");
    Bitmap b(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
    for (int y = 0; y < b.height; ++y) {
        if (static_cast<int>(rows[y].size()) != b.width)
            throw ContractError("bitmap rows must have equal length");
        for (int x = 0; x < b.width; ++x) b.set(x, y, rows[y][x] ? 1 : 0);
    }
    return b;
}

std::vector<std::vector<int>> bitmap_rows(const Bitmap& b) {
    std::vector<std::vector<int>> rows(b.height, std::vector<int>(b.width));
    for (int y = 0; y < b.height; ++y)
        for (int x = 0; x < b.width; ++x) rows[y][x] = b.at(x, y);
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Crossover-free resistive memory network simulator and trainer";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<ContractError>(m, "ContractError");
    py::register_exception<IoError>(m, "IoError");
    py::register_exception<FormatError>(m, "FormatError");
    py::register_exception<StageError>(m, "StageError");

    // ---- circuit ----
    py::class_<ArchitectureSpec>(m, "ArchitectureSpec")
        .def(py::init([](int n_inputs, std::vector<int> fan_ins, double logic_high,
                         double threshold) {
                 ArchitectureSpec a;
                 a.n_inputs = n_inputs;
                 a.fan_ins = std::move(fan_ins);
                 a.logic_high = logic_high;
                 a.threshold = threshold;
                 a.validate();
                 return a;
             }),
             py::arg("n_inputs"), py::arg("fan_ins"), py::arg("logic_high") = 1.0,
             py::arg("threshold") = 0.5)
        .def_readonly("n_inputs", &ArchitectureSpec::n_inputs)
        .def_readonly("fan_ins", &ArchitectureSpec::fan_ins)
        .def_readonly("logic_high", &ArchitectureSpec::logic_high)
        .def_readonly("threshold", &ArchitectureSpec::threshold)
        .def_property_readonly("n_outputs", &ArchitectureSpec::n_outputs);

    m.def("layer_sizes", &layer_sizes, py::arg("arch"));
    m.def("rset_len", [](const ArchitectureSpec& a) { return rset_len(a); }, py::arg("arch"));

    py::class_<Network>(m, "Network")
        .def("forward",
             [](const Network& net, const std::vector<int>& bits) {
                 std::vector<std::uint8_t> b(bits.begin(), bits.end());
                 auto out = net.forward(b);
                 return std::vector<int>(out.begin(), out.end());
             },
             py::arg("input_bits"))
        .def_property_readonly("n_cells", &Network::n_cells)
        .def_property_readonly("rset", &Network::rset);

    m.def("build_network", &build_network, py::arg("arch"), py::arg("rset"));
    m.def("output_tree_gene_indices", &output_tree_gene_indices, py::arg("arch"),
          py::arg("output_index"));
    m.def("assert_no_crossover", [](const ArchitectureSpec& a) {
        auto rep = assert_no_crossover(a);
        py::dict d;
        d["crossover_free"] = rep.crossover_free;
        d["tree_count"] = rep.tree_count;
        d["tree_cell_counts"] = rep.tree_cell_counts;
        d["violations"] = rep.violations;
        return d;
    });

    // ---- imaging ----
    py::class_<Bitmap>(m, "Bitmap")
        .def(py::init(&bitmap_from_rows), py::arg("rows"))
        .def_readonly("width", &Bitmap::width)
        .def_readonly("height", &Bitmap::height)
        .def("rows", &bitmap_rows)
        .def("__eq__", [](const Bitmap& a, const Bitmap& b) { return a == b; });

    m.def("parse_pbm", &parse_pbm, py::arg("text"), py::arg("name") = "pbm");
    m.def("to_pbm", &to_pbm, py::arg("bitmap"));
    m.def("bitmap_to_inputs", [](const Bitmap& b) {
        auto v = bitmap_to_inputs(b);
        return std::vector<int>(v.begin(), v.end());
    });

    py::enum_<SampleMode>(m, "SampleMode")
        .value("TRUNCATED_NORMAL", SampleMode::TruncatedNormal)
        .value("UNIFORM_RANGE", SampleMode::UniformRange);

    py::class_<DeformationParams>(m, "DeformationParams")
        .def(py::init([](double noise_p, double rotation_deg, double scale, int shift_x,
                         int shift_y) {
                 return DeformationParams{noise_p, rotation_deg, scale, shift_x, shift_y};
             }),
             py::arg("noise_p") = 0.0, py::arg("rotation_deg") = 0.0,
             py::arg("scale") = 1.0, py::arg("shift_x") = 0, py::arg("shift_y") = 0)
        .def_readwrite("noise_p", &DeformationParams::noise_p)
        .def_readwrite("rotation_deg", &DeformationParams::rotation_deg)
        .def_readwrite("scale", &DeformationParams::scale)
        .def_readwrite("shift_x", &DeformationParams::shift_x)
        .def_readwrite("shift_y", &DeformationParams::shift_y);

    py::class_<DeformationDistribution>(m, "DeformationDistribution")
        .def(py::init([](double sigma_noise, double sigma_rot_deg, double sigma_scale,
                         double sigma_shift_px, SampleMode mode,
                         std::optional<double> max_shift_px) {
                 DeformationDistribution d;
                 d.sigma_noise = sigma_noise;
                 d.sigma_rot_deg = sigma_rot_deg;
                 d.sigma_scale = sigma_scale;
                 d.sigma_shift_px = sigma_shift_px;
                 d.mode = mode;
                 d.max_shift_px = max_shift_px;
                 d.validate();
                 return d;
             }),
             py::arg("sigma_noise") = 0.0, py::arg("sigma_rot_deg") = 0.0,
             py::arg("sigma_scale") = 0.0, py::arg("sigma_shift_px") = 0.0,
             py::arg("mode") = SampleMode::TruncatedNormal,
             py::arg("max_shift_px") = std::nullopt);

    m.def("sample_params",
          [](const DeformationDistribution& d, std::uint64_t seed) {
              Rng rng(seed);
              return sample_params(d, rng);
          },
          py::arg("dist"), py::arg("seed"));
    m.def("apply_salt_pepper",
          [](const Bitmap& b, double p, std::uint64_t seed) {
              Rng rng(seed);
              return apply_salt_pepper(b, p, rng);
          },
          py::arg("bitmap"), py::arg("p"), py::arg("seed"));
    m.def("rotate", &rotate, py::arg("bitmap"), py::arg("degrees"));
    m.def("scale", &scale, py::arg("bitmap"), py::arg("factor"));
    m.def("shift", &shift, py::arg("bitmap"), py::arg("dx"), py::arg("dy"));
    m.def("deform",
          [](const Bitmap& b, const DeformationParams& p, std::uint64_t seed) {
              Rng rng(seed);
              return deform(b, p, rng);
          },
          py::arg("bitmap"), py::arg("params"), py::arg("seed"));

    py::class_<GlyphSet>(m, "GlyphSet")
        .def("glyph", [](const GlyphSet& g, int i) { return g.glyphs.at(i); }, py::arg("index"))
        .def_readonly("provenance", &GlyphSet::provenance);
    m.def("load_glyphs", &load_glyphs, py::arg("source"));

    // ---- codes ----
    m.def("hamming", [](const std::string& a, const std::string& b) {
        return hamming(code_from_string(a), code_from_string(b));
    });

    py::class_<Codebook>(m, "Codebook")
        .def_property_readonly("main_codes",
                               [](const Codebook& cb) {
                                   std::vector<std::string> out;
                                   for (const auto& c : cb.main_codes)
                                       out.push_back(code_to_string(c));
                                   return out;
                               })
        .def("code_set",
             [](const Codebook& cb, int character) {
                 std::vector<std::string> out;
                 for (const auto& c : cb.code_set(character))
                     out.push_back(code_to_string(c));
                 return out;
             })
        .def("to_text", &Codebook::to_text);

    py::enum_<InputMapKind>(m, "InputMapKind")
        .value("ROW_MAJOR", InputMapKind::RowMajor)
        .value("COLUMN_STRIDE", InputMapKind::ColumnStride);

    m.def("extract_main_codes",
          [](const Network& net, const GlyphSet& glyphs, InputMapKind kind, int width,
             int height) {
              InputMap map = InputMap::make(kind, net.arch(), width, height);
              return extract_main_codes(net, glyphs, map);
          },
          py::arg("net"), py::arg("glyphs"), py::arg("input_map") = InputMapKind::RowMajor,
          py::arg("width") = kGlyphDim, py::arg("height") = kGlyphDim);
    m.def("min_pairwise_distance", &min_pairwise_distance);
    m.def("decode", [](const Codebook& cb, const std::string& observed) {
        auto got = decode(cb, code_from_string(observed));
        return got ? py::cast(*got) : py::none().cast<py::object>();
    });
    m.def("bit_errors", [](const Codebook& cb, int character, const std::string& observed) {
        return bit_errors(cb, character, code_from_string(observed));
    });

    // ---- evolution / harness ----
    py::class_<ValueRange>(m, "ValueRange")
        .def(py::init([](double r_min, double r_max) {
                 ValueRange v{r_min, r_max};
                 v.validate();
                 return v;
             }),
             py::arg("r_min") = 1.0, py::arg("r_max") = 1e4)
        .def_readonly("r_min", &ValueRange::r_min)
        .def_readonly("r_max", &ValueRange::r_max);

    m.def("random_rset",
          [](const ArchitectureSpec& a, const ValueRange& r, std::uint64_t seed) {
              Rng rng = make_stream(seed, "rset");
              return random_rset(a, r, rng);
          },
          py::arg("arch"), py::arg("range"), py::arg("seed"));

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_readonly("arch", &TrainedModel::arch)
        .def_readonly("rset", &TrainedModel::rset)
        .def_readonly("codebook", &TrainedModel::codebook)
        .def_readonly("input_map", &TrainedModel::input_map)
        .def_readonly("seed", &TrainedModel::seed)
        .def_readonly("iterations", &TrainedModel::iterations)
        .def_readonly("final_abe", &TrainedModel::final_abe)
        .def_readonly("converged", &TrainedModel::converged);

    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("model_to_text", &model_to_text);

    py::class_<TestProtocol>(m, "TestProtocol")
        .def(py::init([](const DeformationDistribution& dist, long n_sets) {
                 TestProtocol p{dist, n_sets};
                 p.validate();
                 return p;
             }),
             py::arg("dist"), py::arg("n_sets") = 10000);

    m.def("evaluate",
          [](const TrainedModel& model, const GlyphSet& glyphs, const TestProtocol& protocol,
             std::uint64_t seed, unsigned threads) {
              EvalReport rep = evaluate(model, glyphs, protocol, seed, threads);
              py::dict d;
              d["accuracy"] = rep.accuracy;
              d["abe"] = rep.abe;
              d["max_bit_error"] = rep.max_bit_error;
              d["rejects"] = rep.rejects;
              d["n_sets"] = rep.n_sets;
              d["total"] = rep.total;
              d["runtime_sec"] = rep.runtime_sec;
              d["seed"] = rep.seed;
              return d;
          },
          py::arg("model"), py::arg("glyphs"), py::arg("protocol"), py::arg("seed"),
          py::arg("threads") = 1);

    m.def("train_from_config",
          [](const std::string& config_path, std::optional<std::uint64_t> seed,
             unsigned threads) {
              RunConfig cfg = load_run_config(config_path);
              if (seed) cfg.seed = *seed;
              GlyphSet glyphs = load_glyphs(cfg.glyphs);
              std::ostringstream log;
              TrainedModel model = train(cfg.train, glyphs, cfg.seed, threads, &log);
              return py::make_tuple(model, log.str());
          },
          py::arg("config_path"), py::arg("seed") = std::nullopt, py::arg("threads") = 1);

    m.def("export_netlist_text",
          [](const TrainedModel& model) { return export_netlist(model.arch, model.rset).text; },
          py::arg("model"));
}
