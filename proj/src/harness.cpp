#include "memnet/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "memnet/parallel.hpp"

namespace memnet {

// -----------------------------------------------------------------------------
// Evaluation
// -----------------------------------------------------------------------------

EvalReport evaluate(const TrainedModel& model, const GlyphSet& glyphs,
                    const TestProtocol& protocol, std::uint64_t seed, unsigned threads) {
    protocol.validate();
    auto t0 = std::chrono::steady_clock::now();

    Network net = model.network();
    InputMap map = model.map();
    const Codebook& cb = model.codebook;
    if (min_pairwise_distance(cb) < 3)
        throw ContractError("evaluate: model codebook spacing < 3, decode is ambiguous");

    struct Partial {
        long correct = 0, rejects = 0;
        long total_bits = 0;
        int max_bits = 0;
        std::array<std::array<long, kNumGlyphs + 1>, kNumGlyphs> confusion{};
    };
    std::vector<Partial> parts(protocol.n_sets);
    Deformer deformer = Deformer::from(protocol.dist);

    parallel_for(static_cast<std::size_t>(protocol.n_sets), threads, [&](std::size_t s) {
        Rng rng = make_stream(seed, "eval.set", s);
        Partial& p = parts[s];
        for (int g = 0; g < kNumGlyphs; ++g) {
            DeformationParams params = deformer.sample(rng);
            Bitmap bmp = deform(glyphs.glyph(g), params, rng);
            Code out = net.forward(map.apply(bitmap_to_inputs(bmp)));
            int bits = hamming(out, cb.main_codes[g]);
            p.total_bits += bits;
            p.max_bits = std::max(p.max_bits, bits);
            // Radius-1 decode; spacing >= 3 was checked once above.
            int hit = -1;
            for (int c = 0; c < cb.n_codes(); ++c)
                if (hamming(cb.main_codes[c], out) <= 1) {
                    hit = c;
                    break;
                }
            if (hit < 0) {
                ++p.rejects;
                ++p.confusion[g][kNumGlyphs];
            } else {
                ++p.confusion[g][hit];
                if (hit == g) ++p.correct;
            }
        }
    });

    EvalReport rep;
    rep.n_sets = protocol.n_sets;
    rep.total = protocol.n_sets * kNumGlyphs;
    rep.seed = seed;
    long correct = 0, bits = 0;
    for (const Partial& p : parts) {
        correct += p.correct;
        rep.rejects += p.rejects;
        bits += p.total_bits;
        rep.max_bit_error = std::max(rep.max_bit_error, p.max_bits);
        for (int g = 0; g < kNumGlyphs; ++g)
            for (int c = 0; c <= kNumGlyphs; ++c) rep.confusion[g][c] += p.confusion[g][c];
    }
    rep.accuracy = static_cast<double>(correct) / rep.total;
    rep.abe = static_cast<double>(bits) / rep.total;
    rep.runtime_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string report_text(const EvalReport& rep) {
    std::ostringstream os;
    os << "test sets        " << rep.n_sets << "\n";
    os << "characters       " << rep.total << "\n";
    os << "accuracy         " << rep.accuracy << "\n";
    os << "abe              " << rep.abe << "\n";
    os << "max bit error    " << rep.max_bit_error << "\n";
    os << "rejects          " << rep.rejects << "\n";
    os << "runtime sec      " << rep.runtime_sec << "\n";
    os << "seed             " << rep.seed << "\n";
    os << "misclassified pairs (true->decoded:count):";
    bool any = false;
    for (int g = 0; g < kNumGlyphs; ++g)
        for (int c = 0; c <= kNumGlyphs; ++c) {
            if (c == g || rep.confusion[g][c] == 0) continue;
            os << ' ' << static_cast<char>('A' + g) << "->"
               << (c == kNumGlyphs ? '?' : static_cast<char>('A' + c)) << ':'
               << rep.confusion[g][c];
            any = true;
        }
    if (!any) os << " none";
    os << "\n";
    return os.str();
}

std::string report_csv(const EvalReport& rep) {
    std::ostringstream os;
    os << "char,correct,rejects,errors\n";
    for (int g = 0; g < kNumGlyphs; ++g) {
        long correct = rep.confusion[g][g];
        long rejects = rep.confusion[g][kNumGlyphs];
        long errors = rep.n_sets - correct - rejects;
        os << static_cast<char>('A' + g) << ',' << correct << ',' << rejects << ','
           << errors << "\n";
    }
    os << "TOTAL," << static_cast<long>(std::llround(rep.accuracy * rep.total)) << ','
       << rep.rejects << ',' << (rep.total - std::llround(rep.accuracy * rep.total) -
                                 rep.rejects)
       << "\n";
    return os.str();
}

// -----------------------------------------------------------------------------
// Faults
// -----------------------------------------------------------------------------

FaultKind fault_kind_from_string(const std::string& s) {
    if (s == "open") return FaultKind::Open;
    if (s == "short") return FaultKind::Short;
    if (s == "random-revalue") return FaultKind::RandomRevalue;
    throw ConfigError("unknown fault kind '" + s + "' (open, short, random-revalue)");
}

std::string to_string(FaultKind kind) {
    switch (kind) {
        case FaultKind::Open: return "open";
        case FaultKind::Short: return "short";
        case FaultKind::RandomRevalue: return "random-revalue";
    }
    return "open";
}

std::vector<double> inject_faults(const std::vector<double>& rset, const FaultModel& fm,
                                  Rng& rng) {
    fm.validate();
    std::vector<double> out = rset;
    if (fm.rate == 0.0) return out;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& r : out) {
        if (u(rng) >= fm.rate) continue;
        switch (fm.kind) {
            case FaultKind::Open:
                r = std::numeric_limits<double>::infinity();
                break;
            case FaultKind::Short:
                r = fm.short_value;
                break;
            case FaultKind::RandomRevalue:
                r = random_resistance(fm.revalue_range, rng);
                break;
        }
    }
    return out;
}

std::vector<FaultSweepRow> fault_sweep(const TrainedModel& model, const GlyphSet& glyphs,
                                       const TestProtocol& protocol, FaultKind kind,
                                       const std::vector<double>& rates, int reps,
                                       std::uint64_t seed, unsigned threads) {
    if (reps < 1) throw ContractError("fault_sweep: reps must be >= 1");
    for (std::size_t i = 1; i < rates.size(); ++i)
        if (rates[i] < rates[i - 1]) throw ContractError("fault_sweep: rates must be sorted");

    std::vector<FaultSweepRow> rows;
    for (std::size_t ri = 0; ri < rates.size(); ++ri) {
        FaultModel fm;
        fm.kind = kind;
        fm.rate = rates[ri];
        fm.revalue_range = model.value_range;
        fm.short_value = model.value_range.r_min;

        double sum = 0.0, sumsq = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            Rng frng = make_stream(seed, "fault.draw", ri * 1000003ull + rep);
            TrainedModel faulted = model;
            faulted.rset = inject_faults(model.rset, fm, frng);
            // Same evaluation stream for every rep: rate 0 then reproduces the
            // plain evaluate() accuracy under this seed.
            EvalReport r = evaluate(faulted, glyphs, protocol, stream_seed(seed, "eval", 0),
                                    threads);
            sum += r.accuracy;
            sumsq += r.accuracy * r.accuracy;
        }
        FaultSweepRow row;
        row.rate = rates[ri];
        row.reps = reps;
        row.mean_acc = sum / reps;
        double var = reps > 1 ? (sumsq - sum * sum / reps) / (reps - 1) : 0.0;
        row.std_acc = var > 0 ? std::sqrt(var) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::string fault_sweep_csv(const std::vector<FaultSweepRow>& rows) {
    std::ostringstream os;
    os << "rate,mean_acc,std_acc,reps\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%g,%g,%g,%d\n", r.rate, r.mean_acc, r.std_acc,
                      r.reps);
        os << buf;
    }
    return os.str();
}

// -----------------------------------------------------------------------------
// Model file
// -----------------------------------------------------------------------------

namespace {

constexpr const char* kMagic = "MEMNET-MODEL";
constexpr int kVersion = 1;

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string model_to_text(const TrainedModel& model) {
    std::ostringstream os;
    os << kMagic << " v" << kVersion << "\n";
    os << "arch " << model.arch.n_inputs;
    for (std::size_t i = 0; i < model.arch.fan_ins.size(); ++i)
        os << (i ? "," : " ") << model.arch.fan_ins[i];
    os << "\n";
    os << "logic_high " << fmt17(model.arch.logic_high) << "\n";
    os << "threshold " << fmt17(model.arch.threshold) << "\n";
    os << "input_map " << to_string(model.input_map) << "\n";
    os << "image " << model.image_width << " " << model.image_height << "\n";
    os << "value_range " << fmt17(model.value_range.r_min) << " "
       << fmt17(model.value_range.r_max) << " " << fmt17(model.value_range.output_bias)
       << "\n";
    os << "seed " << model.seed << "\n";
    os << "iterations " << model.iterations << "\n";
    os << "final_abe " << fmt17(model.final_abe) << "\n";
    os << "converged " << (model.converged ? 1 : 0) << "\n";
    os << "codebook " << model.codebook.n_codes() << "\n";
    os << model.codebook.to_text();
    os << "rset " << model.rset.size() << "\n";
    for (double r : model.rset) os << fmt17(r) << "\n";
    std::string payload = os.str();
    char sum[32];
    std::snprintf(sum, sizeof sum, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    return payload + "checksum fnv1a64 " + sum + "\n";
}

namespace {

class LineReader {
public:
    explicit LineReader(const std::string& text, const std::string& name)
        : is_(text), name_(name) {}

    std::string next(const char* what) {
        std::string line;
        if (!std::getline(is_, line))
            throw FormatError(FormatError::Kind::Parse,
                              name_ + ": unexpected end of file, expected " + what);
        return line;
    }

    const std::string& name() const { return name_; }

private:
    std::istringstream is_;
    std::string name_;
};

}  // namespace

TrainedModel model_from_text(const std::string& text, const std::string& name) {
    // Checksum first: everything before the final checksum line must hash to it.
    std::size_t pos = text.rfind("checksum ");
    if (pos == std::string::npos || text.find('\n', pos) == std::string::npos)
        throw FormatError(FormatError::Kind::Checksum, name + ": missing checksum line");
    std::string payload = text.substr(0, pos);
    std::istringstream cs(text.substr(pos));
    std::string kw, algo, hex;
    cs >> kw >> algo >> hex;
    if (algo != "fnv1a64")
        throw FormatError(FormatError::Kind::Checksum, name + ": unknown checksum " + algo);
    char want[32];
    std::snprintf(want, sizeof want, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    if (hex != want)
        throw FormatError(FormatError::Kind::Checksum,
                          name + ": checksum mismatch (file corrupt or truncated)");

    LineReader rd(payload, name);
    std::istringstream head(rd.next("header"));
    std::string magic, ver;
    head >> magic >> ver;
    if (magic != kMagic)
        throw FormatError(FormatError::Kind::Parse, name + ": not a model file");
    if (ver != "v" + std::to_string(kVersion))
        throw FormatError(FormatError::Kind::Version,
                          name + ": unsupported version " + ver + ", expected v" +
                              std::to_string(kVersion));

    TrainedModel model;
    auto expect_key = [&](const std::string& line, const char* key) -> std::istringstream {
        std::istringstream ls(line);
        std::string k;
        ls >> k;
        if (k != key)
            throw FormatError(FormatError::Kind::Parse,
                              name + ": expected '" + key + "', got '" + k + "'");
        return ls;
    };

    {
        auto ls = expect_key(rd.next("arch"), "arch");
        std::string fans;
        ls >> model.arch.n_inputs >> fans;
        std::istringstream fs(fans);
        std::string tok;
        while (std::getline(fs, tok, ',')) model.arch.fan_ins.push_back(std::stoi(tok));
    }
    expect_key(rd.next("logic_high"), "logic_high") >> model.arch.logic_high;
    expect_key(rd.next("threshold"), "threshold") >> model.arch.threshold;
    {
        std::string s;
        expect_key(rd.next("input_map"), "input_map") >> s;
        model.input_map = input_map_kind_from_string(s);
    }
    expect_key(rd.next("image"), "image") >> model.image_width >> model.image_height;
    expect_key(rd.next("value_range"), "value_range") >> model.value_range.r_min >>
        model.value_range.r_max >> model.value_range.output_bias;
    expect_key(rd.next("seed"), "seed") >> model.seed;
    expect_key(rd.next("iterations"), "iterations") >> model.iterations;
    expect_key(rd.next("final_abe"), "final_abe") >> model.final_abe;
    {
        int c = 0;
        expect_key(rd.next("converged"), "converged") >> c;
        model.converged = c != 0;
    }

    int n_codes = 0;
    expect_key(rd.next("codebook"), "codebook") >> n_codes;
    std::string cb_text;
    for (int i = 0; i < n_codes; ++i) cb_text += rd.next("codebook line") + "\n";
    model.codebook = Codebook::from_text(cb_text);

    std::size_t n_rset = 0;
    expect_key(rd.next("rset"), "rset") >> n_rset;
    model.rset.reserve(n_rset);
    for (std::size_t i = 0; i < n_rset; ++i) {
        std::string line = rd.next("resistance");
        try {
            model.rset.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw FormatError(FormatError::Kind::Parse,
                              name + ": bad resistance line '" + line + "'");
        }
    }

    model.arch.validate();
    if (model.rset.size() != rset_len(model.arch))
        throw FormatError(FormatError::Kind::Parse,
                          name + ": rset length does not match architecture");
    return model;
}

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << model_to_text(model);
    if (!out) throw IoError("write failed: " + path);
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_text(buf.str(), path);
}

}  // namespace memnet
