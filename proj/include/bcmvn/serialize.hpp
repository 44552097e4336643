#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bcmvn/bicomplex.hpp"
#include "bcmvn/datagen.hpp"
#include "bcmvn/errors.hpp"
#include "bcmvn/hyperbolic.hpp"
#include "bcmvn/perceptron.hpp"

namespace bcmvn {

// ordered_json keeps insertion order on dump, so rerunning a command with
// identical inputs produces byte-identical files.
using json = nlohmann::ordered_json;

inline constexpr int format_version = 1;

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline std::string format_double17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T>
T json_get(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("missing or malformed field '") + key + "': " + e.what());
    }
}

inline const json& json_at(const json& j, const char* key) {
    if (!j.is_object()) throw ParseError(std::string("expected an object with field '") + key + "'");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Scalars and vectors
// ---------------------------------------------------------------------------

inline json complex_to_json(const std::complex<double>& c) {
    return json{{"re", c.real()}, {"im", c.imag()}};
}

inline std::complex<double> complex_from_json(const json& j) {
    return {json_get<double>(j, "re"), json_get<double>(j, "im")};
}

inline json bicomplex_to_json(const Bicomplex& z) {
    return json{{"x1", z.x1()}, {"x2", z.x2()}, {"x3", z.x3()}, {"x4", z.x4()}};
}

inline Bicomplex bicomplex_from_json(const json& j) {
    return Bicomplex::from_cartesian(json_get<double>(j, "x1"), json_get<double>(j, "x2"),
                                     json_get<double>(j, "x3"), json_get<double>(j, "x4"));
}

inline json hyperbolic_to_json(const Hyperbolic& h) { return json{{"x", h.x}, {"y", h.y}}; }

inline Hyperbolic hyperbolic_from_json(const json& j) {
    return {json_get<double>(j, "x"), json_get<double>(j, "y")};
}

inline json complex_vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back(complex_to_json(c));
    return out;
}

inline ComplexVector complex_vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of complex scalars");
    ComplexVector out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(complex_from_json(item));
    return out;
}

inline json bicomplex_vector_to_json(const BicomplexVector& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(bicomplex_to_json(z));
    return out;
}

inline BicomplexVector bicomplex_vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of bicomplex scalars");
    BicomplexVector out;
    out.reserve(j.size());
    for (const auto& item : j) out.push_back(bicomplex_from_json(item));
    return out;
}

inline json real_vector_to_json(const std::vector<double>& v) {
    json out = json::array();
    for (double c : v) out.push_back(c);
    return out;
}

inline std::vector<double> real_vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of reals");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_number()) throw ParseError("expected a real number");
        out.push_back(item.get<double>());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Config structures
// ---------------------------------------------------------------------------

inline const char* mode_name(ProblemMode mode) {
    switch (mode) {
        case ProblemMode::real: return "real";
        case ProblemMode::complex_mvn: return "complex";
        case ProblemMode::bicomplex_mvn: return "bicomplex";
    }
    return "?";
}

inline ProblemMode mode_from_name(const std::string& name) {
    if (name == "real") return ProblemMode::real;
    if (name == "complex") return ProblemMode::complex_mvn;
    if (name == "bicomplex") return ProblemMode::bicomplex_mvn;
    throw ParseError("unknown mode '" + name + "' (expected real|complex|bicomplex)");
}

inline const char* rule_form_name(RuleForm form) {
    return form == RuleForm::idempotent ? "idempotent" : "direct";
}

inline RuleForm rule_form_from_name(const std::string& name) {
    if (name == "idempotent") return RuleForm::idempotent;
    if (name == "direct") return RuleForm::direct;
    throw ParseError("unknown rule form '" + name + "' (expected idempotent|direct)");
}

inline json genspec_to_json(const GenSpec& spec) {
    return json{{"n", spec.n},         {"k", spec.k},         {"count", spec.count},
                {"margin", spec.margin}, {"seed", spec.seed}, {"r_min", spec.r_min},
                {"r_max", spec.r_max}};
}

inline GenSpec genspec_from_json(const json& j) {
    GenSpec spec;
    spec.n = json_get<int>(j, "n");
    spec.k = json_get<int>(j, "k");
    spec.count = json_get<int>(j, "count");
    spec.margin = json_get<double>(j, "margin");
    spec.seed = json_get<std::uint64_t>(j, "seed");
    spec.r_min = json_get<double>(j, "r_min");
    spec.r_max = json_get<double>(j, "r_max");
    return spec;
}

inline json trainconfig_to_json(const TrainConfig& cfg) {
    return json{{"C", cfg.C},
                {"max_epochs", cfg.max_epochs},
                {"k", cfg.k},
                {"seed", cfg.seed},
                {"rule_form", rule_form_name(cfg.rule_form)}};
}

inline TrainConfig trainconfig_from_json(const json& j) {
    TrainConfig cfg;
    cfg.C = json_get<double>(j, "C");
    cfg.max_epochs = json_get<int>(j, "max_epochs");
    cfg.k = json_get<int>(j, "k");
    cfg.seed = json_get<std::uint64_t>(j, "seed");
    cfg.rule_form = rule_form_from_name(json_get<std::string>(j, "rule_form"));
    return cfg;
}

inline json sectorconfig_to_json(const SectorConfig& cfg) {
    return json{{"k", cfg.k}, {"boundary_tolerance", cfg.boundary_tolerance}};
}

inline SectorConfig sectorconfig_from_json(const json& j) {
    return SectorConfig(json_get<int>(j, "k"), json_get<double>(j, "boundary_tolerance"));
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

inline json dataset_to_json(const RealDataset& ds, bool strip_hidden = false) {
    json out{{"format_version", format_version},
             {"mode", "real"},
             {"spec", genspec_to_json(ds.spec)}};
    if (ds.problem.has_hidden && !strip_hidden)
        out["hidden"] = json{{"a", real_vector_to_json(ds.problem.hidden_a)},
                             {"delta", ds.problem.hidden_delta}};
    else
        out["hidden"] = nullptr;
    json samples = json::array();
    for (const auto& smp : ds.problem.samples)
        samples.push_back(json{{"x", real_vector_to_json(smp.x)}, {"class", smp.cls}});
    out["samples"] = std::move(samples);
    return out;
}

inline json dataset_to_json(const ComplexDataset& ds, bool strip_hidden = false) {
    json out{{"format_version", format_version},
             {"mode", "complex"},
             {"spec", genspec_to_json(ds.spec)}};
    if (ds.has_hidden && !strip_hidden)
        out["hidden"] = json{{"W", complex_vector_to_json(ds.hidden_w)}};
    else
        out["hidden"] = nullptr;
    json samples = json::array();
    for (const auto& smp : ds.samples)
        samples.push_back(json{{"x", complex_vector_to_json(smp.x)}, {"label", smp.q}});
    out["samples"] = std::move(samples);
    return out;
}

inline json dataset_to_json(const BicomplexDataset& ds, bool strip_hidden = false) {
    json out{{"format_version", format_version},
             {"mode", "bicomplex"},
             {"spec", genspec_to_json(ds.spec)}};
    if (ds.has_hidden && !strip_hidden)
        out["hidden"] = json{{"W", bicomplex_vector_to_json(ds.hidden_w)}};
    else
        out["hidden"] = nullptr;
    json samples = json::array();
    for (const auto& smp : ds.samples)
        samples.push_back(json{{"x", bicomplex_vector_to_json(smp.x)},
                               {"labels", json::array({smp.q1, smp.q2})}});
    out["samples"] = std::move(samples);
    return out;
}

using AnyDataset = std::variant<RealDataset, ComplexDataset, BicomplexDataset>;

inline AnyDataset dataset_from_json(const json& j) {
    ProblemMode mode = mode_from_name(json_get<std::string>(j, "mode"));
    GenSpec spec = genspec_from_json(json_at(j, "spec"));
    const json& samples = json_at(j, "samples");
    if (!samples.is_array()) throw ParseError("dataset: 'samples' must be an array");
    bool has_hidden = j.contains("hidden") && !j.at("hidden").is_null();

    if (mode == ProblemMode::real) {
        RealDataset ds;
        ds.spec = spec;
        ds.problem.has_hidden = has_hidden;
        if (has_hidden) {
            ds.problem.hidden_a = real_vector_from_json(json_at(json_at(j, "hidden"), "a"));
            ds.problem.hidden_delta = json_get<double>(json_at(j, "hidden"), "delta");
        }
        for (const auto& item : samples) {
            RealSample smp;
            smp.x = real_vector_from_json(json_at(item, "x"));
            smp.cls = json_get<int>(item, "class");
            if (smp.cls != 1 && smp.cls != -1)
                throw ParseError("dataset: real class labels must be +1 or -1");
            ds.problem.samples.push_back(std::move(smp));
        }
        return ds;
    }
    if (mode == ProblemMode::complex_mvn) {
        ComplexDataset ds;
        ds.spec = spec;
        ds.has_hidden = has_hidden;
        if (has_hidden) ds.hidden_w = complex_vector_from_json(json_at(json_at(j, "hidden"), "W"));
        for (const auto& item : samples) {
            ComplexSample smp;
            smp.x = complex_vector_from_json(json_at(item, "x"));
            smp.q = json_get<int>(item, "label");
            ds.samples.push_back(std::move(smp));
        }
        return ds;
    }
    BicomplexDataset ds;
    ds.spec = spec;
    ds.has_hidden = has_hidden;
    if (has_hidden) ds.hidden_w = bicomplex_vector_from_json(json_at(json_at(j, "hidden"), "W"));
    for (const auto& item : samples) {
        BicomplexSample smp;
        smp.x = bicomplex_vector_from_json(json_at(item, "x"));
        const json& labels = json_at(item, "labels");
        if (!labels.is_array() || labels.size() != 2 || !labels[0].is_number_integer() ||
            !labels[1].is_number_integer())
            throw ParseError("dataset: bicomplex labels must be [q1, q2]");
        smp.q1 = labels[0].get<int>();
        smp.q2 = labels[1].get<int>();
        ds.samples.push_back(std::move(smp));
    }
    return ds;
}

inline AnyDataset load_dataset(const std::string& path) {
    return dataset_from_json(parse_json_text(read_text_file(path), "dataset " + path));
}

// ---------------------------------------------------------------------------
// Weights files
// ---------------------------------------------------------------------------

struct RealWeightsFile {
    std::vector<double> a;
    bool converged = false;
    long long steps_to_converge = 0;
};

struct ComplexWeightsFile {
    int k = 2;
    ComplexWeights weights;
    bool converged = false;
    long long steps_to_converge = 0;
};

struct BicomplexWeightsFile {
    int k = 2;
    BicomplexWeights weights;
    bool converged = false;
    long long steps_to_converge = 0;
    long long n1 = 0, n2 = 0;
};

using AnyWeights = std::variant<RealWeightsFile, ComplexWeightsFile, BicomplexWeightsFile>;

inline json weights_to_json(const RealWeightsFile& wf) {
    return json{{"format_version", format_version},
                {"mode", "real"},
                {"a", real_vector_to_json(wf.a)},
                {"converged", wf.converged},
                {"steps_to_converge", wf.steps_to_converge}};
}

inline json weights_to_json(const ComplexWeightsFile& wf) {
    return json{{"format_version", format_version},
                {"mode", "complex"},
                {"k", wf.k},
                {"use_bias", wf.weights.use_bias},
                {"w0", complex_to_json(wf.weights.w0)},
                {"W", complex_vector_to_json(wf.weights.w)},
                {"converged", wf.converged},
                {"steps_to_converge", wf.steps_to_converge}};
}

inline json weights_to_json(const BicomplexWeightsFile& wf) {
    return json{{"format_version", format_version},
                {"mode", "bicomplex"},
                {"k", wf.k},
                {"use_bias", wf.weights.use_bias},
                {"w0", bicomplex_to_json(wf.weights.w0)},
                {"W", bicomplex_vector_to_json(wf.weights.w)},
                {"converged", wf.converged},
                {"steps_to_converge", wf.steps_to_converge},
                {"n1", wf.n1},
                {"n2", wf.n2}};
}

inline AnyWeights weights_from_json(const json& j) {
    ProblemMode mode = mode_from_name(json_get<std::string>(j, "mode"));
    if (mode == ProblemMode::real) {
        RealWeightsFile wf;
        wf.a = real_vector_from_json(json_at(j, "a"));
        wf.converged = json_get<bool>(j, "converged");
        wf.steps_to_converge = json_get<long long>(j, "steps_to_converge");
        return wf;
    }
    if (mode == ProblemMode::complex_mvn) {
        ComplexWeightsFile wf;
        wf.k = json_get<int>(j, "k");
        wf.weights.use_bias = json_get<bool>(j, "use_bias");
        wf.weights.w0 = complex_from_json(json_at(j, "w0"));
        wf.weights.w = complex_vector_from_json(json_at(j, "W"));
        wf.converged = json_get<bool>(j, "converged");
        wf.steps_to_converge = json_get<long long>(j, "steps_to_converge");
        return wf;
    }
    BicomplexWeightsFile wf;
    wf.k = json_get<int>(j, "k");
    wf.weights.use_bias = json_get<bool>(j, "use_bias");
    wf.weights.w0 = bicomplex_from_json(json_at(j, "w0"));
    wf.weights.w = bicomplex_vector_from_json(json_at(j, "W"));
    wf.converged = json_get<bool>(j, "converged");
    wf.steps_to_converge = json_get<long long>(j, "steps_to_converge");
    wf.n1 = json_get<long long>(j, "n1");
    wf.n2 = json_get<long long>(j, "n2");
    return wf;
}

inline AnyWeights load_weights(const std::string& path) {
    return weights_from_json(parse_json_text(read_text_file(path), "weights " + path));
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

inline json trace_to_json(const TrainingTrace& trace, ProblemMode mode) {
    json updates = json::array();
    const bool bc = mode == ProblemMode::bicomplex_mvn;
    for (const auto& rec : trace.updates) {
        if (bc)
            updates.push_back(json{{"step", rec.step},
                                   {"sample", rec.sample},
                                   {"q1", rec.q1},
                                   {"s1", rec.s1},
                                   {"q2", rec.q2},
                                   {"s2", rec.s2},
                                   {"norm1", rec.norm1},
                                   {"norm2", rec.norm2}});
        else
            updates.push_back(json{{"step", rec.step},
                                   {"sample", rec.sample},
                                   {"q", rec.q1},
                                   {"s", rec.s1},
                                   {"norm", rec.norm1}});
    }
    json out{{"format_version", format_version},
             {"mode", mode_name(mode)},
             {"updates", std::move(updates)},
             {"epochs", trace.epochs},
             {"converged", trace.converged},
             {"steps_to_converge", trace.steps_to_converge}};
    if (bc) {
        out["n1"] = trace.n1;
        out["n2"] = trace.n2;
    }
    return out;
}

struct TraceFile {
    ProblemMode mode;
    TrainingTrace trace;
    // Training parameters embedded by the train command, so bound checks can
    // recompute their constants from the trace alone.
    bool has_train = false;
    double C = 1.0;
    int k = 0;
    bool use_bias = true;
};

inline TraceFile trace_from_json(const json& j) {
    TraceFile out;
    out.mode = mode_from_name(json_get<std::string>(j, "mode"));
    if (j.contains("train") && j.at("train").is_object()) {
        out.has_train = true;
        out.C = json_get<double>(j.at("train"), "C");
        out.k = json_get<int>(j.at("train"), "k");
        out.use_bias = json_get<bool>(j.at("train"), "use_bias");
    }
    const bool bc = out.mode == ProblemMode::bicomplex_mvn;
    const json& updates = json_at(j, "updates");
    if (!updates.is_array()) throw ParseError("trace: 'updates' must be an array");
    for (const auto& item : updates) {
        UpdateRecord rec;
        rec.step = json_get<long long>(item, "step");
        rec.sample = json_get<int>(item, "sample");
        if (bc) {
            rec.q1 = json_get<int>(item, "q1");
            rec.s1 = json_get<int>(item, "s1");
            rec.q2 = json_get<int>(item, "q2");
            rec.s2 = json_get<int>(item, "s2");
            rec.norm1 = json_get<double>(item, "norm1");
            rec.norm2 = json_get<double>(item, "norm2");
        } else {
            rec.q1 = json_get<int>(item, "q");
            rec.s1 = json_get<int>(item, "s");
            rec.norm1 = json_get<double>(item, "norm");
        }
        out.trace.updates.push_back(rec);
    }
    out.trace.epochs = json_get<std::vector<int>>(j, "epochs");
    out.trace.converged = json_get<bool>(j, "converged");
    out.trace.steps_to_converge = json_get<long long>(j, "steps_to_converge");
    if (bc) {
        out.trace.n1 = json_get<long long>(j, "n1");
        out.trace.n2 = json_get<long long>(j, "n2");
    } else {
        out.trace.n1 = out.trace.n2 = out.trace.steps_to_converge;
    }
    return out;
}

inline TraceFile load_trace(const std::string& path) {
    return trace_from_json(parse_json_text(read_text_file(path), "trace " + path));
}

// CSV export: one row per fired update, floats in 17-significant-digit form.
inline std::string trace_to_csv(const TrainingTrace& trace, ProblemMode mode) {
    std::string out;
    if (mode == ProblemMode::bicomplex_mvn) {
        out = "step,sample,q1,s1,q2,s2,norm1,norm2\n";
        for (const auto& rec : trace.updates) {
            out += std::to_string(rec.step) + "," + std::to_string(rec.sample) + "," +
                   std::to_string(rec.q1) + "," + std::to_string(rec.s1) + "," +
                   std::to_string(rec.q2) + "," + std::to_string(rec.s2) + "," +
                   format_double17(rec.norm1) + "," + format_double17(rec.norm2) + "\n";
        }
    } else {
        out = "step,sample,q,s,norm\n";
        for (const auto& rec : trace.updates) {
            out += std::to_string(rec.step) + "," + std::to_string(rec.sample) + "," +
                   std::to_string(rec.q1) + "," + std::to_string(rec.s1) + "," +
                   format_double17(rec.norm1) + "\n";
        }
    }
    return out;
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace bcmvn
