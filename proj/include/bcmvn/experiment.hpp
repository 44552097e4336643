#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "bcmvn/activation.hpp"
#include "bcmvn/datagen.hpp"
#include "bcmvn/errors.hpp"
#include "bcmvn/perceptron.hpp"
#include "bcmvn/serialize.hpp"

namespace bcmvn {

// ---------------------------------------------------------------------------
// Verification: recompute the activation for every sample against its label.
// ---------------------------------------------------------------------------

struct VerifyReport {
    long long checked = 0;
    long long violations = 0;       // label disagreements (zero-argument included)
    long long zero_arguments = 0;   // samples where the activation was undefined
    long long decomposition_mismatches = 0;  // bicomplex slotwise cross-check
    std::vector<std::string> lines;          // at most max_lines diagnostics

    static constexpr std::size_t max_lines = 20;
    void add_line(std::string line) {
        if (lines.size() < max_lines) lines.push_back(std::move(line));
    }
    bool clean() const { return violations == 0 && decomposition_mismatches == 0; }
};

inline VerifyReport verify_real(const RealSeparableProblem& problem,
                                const std::vector<double>& a) {
    VerifyReport report;
    for (std::size_t n = 0; n < problem.samples.size(); ++n) {
        const RealSample& smp = problem.samples[n];
        require_same_length(smp.x.size(), a.size(), "verify_real");
        double dot = 0.0;
        for (std::size_t d = 0; d < a.size(); ++d) dot += a[d] * smp.x[d];
        int predicted = dot > 0.0 ? +1 : (dot < 0.0 ? -1 : 0);
        ++report.checked;
        if (predicted != smp.cls) {
            ++report.violations;
            report.add_line("sample " + std::to_string(n) + ": class " +
                            std::to_string(smp.cls) + " but a.x = " + format_double17(dot));
        }
    }
    return report;
}

inline VerifyReport verify_complex(const std::vector<ComplexSample>& samples,
                                   const ComplexWeights& weights, int k) {
    VerifyReport report;
    SectorConfig sc(k);
    for (std::size_t n = 0; n < samples.size(); ++n) {
        ++report.checked;
        std::complex<double> z = weighted_sum_complex(
            weights.use_bias ? weights.w0 : std::complex<double>{}, weights.w, samples[n].x);
        int s = sector_or_sentinel(z, sc);
        if (s == -1) {
            ++report.zero_arguments;
            ++report.violations;
            report.add_line("sample " + std::to_string(n) +
                            ": zero argument (activation undefined)");
        } else if (s != samples[n].q) {
            ++report.violations;
            report.add_line("sample " + std::to_string(n) + ": label " +
                            std::to_string(samples[n].q) + " but sector " + std::to_string(s));
        }
    }
    return report;
}

// Bicomplex verification also cross-checks that the joint activation agrees
// with the two slotwise complex evaluations.
inline VerifyReport verify_bc(const std::vector<BicomplexSample>& samples,
                              const BicomplexWeights& weights, int k) {
    VerifyReport report;
    SectorConfig sc(k);
    IdempotentParts b = idempotent_decompose(weights.w0);
    ComplexVector w1(weights.w.size()), w2(weights.w.size());
    for (std::size_t d = 0; d < weights.w.size(); ++d) {
        IdempotentParts p = idempotent_decompose(weights.w[d]);
        w1[d] = p.l1;
        w2[d] = p.l2;
    }
    for (std::size_t n = 0; n < samples.size(); ++n) {
        ++report.checked;
        Bicomplex z = weighted_sum_bc(weights.use_bias ? weights.w0 : Bicomplex{}, weights.w,
                                      samples[n].x);
        IdempotentParts pz = idempotent_decompose(z);
        int s1 = sector_or_sentinel(pz.l1, sc);
        int s2 = sector_or_sentinel(pz.l2, sc);
        if (s1 == -1 || s2 == -1) {
            ++report.zero_arguments;
            ++report.violations;
            report.add_line("sample " + std::to_string(n) + ": zero argument in slot " +
                            (s1 == -1 ? std::string("1") : std::string("2")));
            continue;
        }
        if (s1 != samples[n].q1 || s2 != samples[n].q2) {
            ++report.violations;
            report.add_line("sample " + std::to_string(n) + ": labels (" +
                            std::to_string(samples[n].q1) + "," +
                            std::to_string(samples[n].q2) + ") but sectors (" +
                            std::to_string(s1) + "," + std::to_string(s2) + ")");
        }
        // Slotwise decomposition cross-check: evaluating each slot's complex
        // weighted sum directly must land in the same sectors.
        std::complex<double> z1 = weighted_sum_complex(
            weights.use_bias ? b.l1 : std::complex<double>{}, w1, slot1(samples[n].x));
        std::complex<double> z2 = weighted_sum_complex(
            weights.use_bias ? b.l2 : std::complex<double>{}, w2, slot2(samples[n].x));
        if (sector_or_sentinel(z1, sc) != s1 || sector_or_sentinel(z2, sc) != s2) {
            ++report.decomposition_mismatches;
            report.add_line("sample " + std::to_string(n) +
                            ": joint and slotwise evaluations disagree");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Bound checks against the hidden generator weights.
// ---------------------------------------------------------------------------

struct RealBoundsReport {
    long long updates = 0;   // fired updates M
    double delta = 0.0;      // hidden margin
    long long limit = 0;     // ceil(1/delta^2)
    bool pass = false;       // M + 1 <= limit
};

inline RealBoundsReport bounds_real(const RealSeparableProblem& problem,
                                    const TrainingTrace& trace) {
    if (!problem.has_hidden)
        throw MissingHidden("bounds_real: dataset carries no hidden separator");
    RealBoundsReport report;
    report.updates = static_cast<long long>(trace.updates.size());
    report.delta = problem.hidden_delta;
    report.limit = static_cast<long long>(std::ceil(1.0 / (report.delta * report.delta)));
    report.pass = report.updates + 1 <= report.limit;
    return report;
}

struct ComplexBoundsReport {
    double m_bound = 0.0;            // max over samples of 2C^2(||X||^2 + bias)
    long long upper_violations = 0;  // steps with ||W_t||^2 > t * m_bound (beyond 1e-9 rel)
    double worst_upper_ratio = 0.0;  // max of ||W_t||^2 / (t * m_bound)
    bool upper_pass = false;
    double m = 0.0;                  // min step increment of <W, W_hidden>
    long long lower_violations = 0;  // steps with ||W_t|| < m t / ||W_hidden||
    bool lower_pass = false;
    double hidden_norm = 0.0;
};

// Checks the sandwich ||W_t||^2 <= t * M_bound (upper) and
// ||W_t|| >= m t / ||W_hidden|| (lower) along the fired updates of a complex
// training trace, with m recomputed from the hidden weights. Tolerance is
// 1e-9 relative on both sides.
inline ComplexBoundsReport bounds_complex(const ComplexDataset& dataset,
                                          const TrainingTrace& trace, double C,
                                          bool use_bias, int k) {
    if (!dataset.has_hidden)
        throw MissingHidden("bounds_complex: dataset carries no hidden weights");
    ComplexBoundsReport report;
    const double bias_term = use_bias ? 1.0 : 0.0;
    for (const auto& smp : dataset.samples) {
        double norm_sq = 0.0;
        for (const auto& c : smp.x) norm_sq += std::norm(c);
        report.m_bound = std::max(report.m_bound, 2.0 * C * C * (norm_sq + bias_term));
    }
    report.hidden_norm = vector_norm(dataset.hidden_w);

    report.m = std::numeric_limits<double>::infinity();
    report.upper_pass = true;
    report.lower_pass = true;
    if (trace.updates.empty()) {
        report.m = 0.0;
        return report;
    }
    long long t = 0;
    for (const auto& rec : trace.updates) {
        ++t;
        if (rec.sample < 0 || rec.sample >= static_cast<int>(dataset.samples.size()))
            throw ParseError("bounds_complex: trace references sample " +
                             std::to_string(rec.sample) + " outside the dataset");
        const ComplexSample& smp = dataset.samples[rec.sample];
        std::complex<double> z_hidden =
            weighted_sum_complex({0.0, 0.0}, dataset.hidden_w, smp.x);
        std::complex<double> d = unit_root(rec.q1, k);
        if (rec.s1 >= 0) d -= unit_root(rec.s1, k);
        report.m = std::min(report.m, (C * d * std::conj(z_hidden)).real());

        double norm_sq = rec.norm1 * rec.norm1;
        double cap = static_cast<double>(t) * report.m_bound;
        double ratio = norm_sq / cap;
        report.worst_upper_ratio = std::max(report.worst_upper_ratio, ratio);
        if (norm_sq > cap * (1.0 + 1e-9)) {
            ++report.upper_violations;
            report.upper_pass = false;
        }
    }
    t = 0;
    for (const auto& rec : trace.updates) {
        ++t;
        double floor = report.m * static_cast<double>(t) / report.hidden_norm;
        if (rec.norm1 < floor * (1.0 - 1e-9) - 1e-12) {
            ++report.lower_violations;
            report.lower_pass = false;
        }
    }
    return report;
}

struct BicomplexBoundsReport {
    ComplexBoundsReport slot1;
    ComplexBoundsReport slot2;
    bool pass() const {
        return slot1.upper_pass && slot1.lower_pass && slot2.upper_pass && slot2.lower_pass;
    }
};

// Slotwise sandwich: each idempotent slot of the trace is checked against
// the corresponding slot of the hidden weights.
inline BicomplexBoundsReport bounds_bc(const BicomplexDataset& dataset,
                                       const TrainingTrace& trace, double C, bool use_bias,
                                       int k) {
    if (!dataset.has_hidden)
        throw MissingHidden("bounds_bc: dataset carries no hidden weights");
    ComplexDataset ds1, ds2;
    ds1.spec = ds2.spec = dataset.spec;
    ds1.has_hidden = ds2.has_hidden = true;
    ds1.hidden_w = slot1(dataset.hidden_w);
    ds2.hidden_w = slot2(dataset.hidden_w);
    for (const auto& smp : dataset.samples) {
        ds1.samples.push_back({slot1(smp.x), smp.q1});
        ds2.samples.push_back({slot2(smp.x), smp.q2});
    }
    // Project the joint trace onto each slot, keeping only that slot's fired
    // updates (a clean slot is unchanged by a joint record).
    TrainingTrace t1, t2;
    for (const auto& rec : trace.updates) {
        if (rec.s1 != rec.q1) {
            UpdateRecord r = rec;
            r.q1 = rec.q1;
            r.s1 = rec.s1;
            r.norm1 = rec.norm1;
            t1.updates.push_back(r);
        }
        if (rec.s2 != rec.q2) {
            UpdateRecord r;
            r.step = rec.step;
            r.sample = rec.sample;
            r.q1 = rec.q2;
            r.s1 = rec.s2;
            r.norm1 = rec.norm2;
            t2.updates.push_back(r);
        }
    }
    BicomplexBoundsReport report;
    report.slot1 = bounds_complex(ds1, t1, C, use_bias, k);
    report.slot2 = bounds_complex(ds2, t2, C, use_bias, k);
    return report;
}

// ---------------------------------------------------------------------------
// Experiment orchestration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    ProblemMode mode = ProblemMode::complex_mvn;
    GenSpec gen;
    TrainConfig train;
    std::string output_dir = ".";
    bool write_json = true;
    bool write_csv = true;
    bool strip_hidden = false;
};

inline json experimentconfig_to_json(const ExperimentConfig& cfg) {
    json formats = json::array();
    if (cfg.write_json) formats.push_back("json");
    if (cfg.write_csv) formats.push_back("csv");
    return json{{"mode", mode_name(cfg.mode)},
                {"gen", genspec_to_json(cfg.gen)},
                {"train", trainconfig_to_json(cfg.train)},
                {"output_dir", cfg.output_dir},
                {"formats", std::move(formats)}};
}

inline ExperimentConfig experimentconfig_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.mode = mode_from_name(json_get<std::string>(j, "mode"));
    cfg.gen = genspec_from_json(json_at(j, "gen"));
    cfg.train = trainconfig_from_json(json_at(j, "train"));
    cfg.output_dir = json_get<std::string>(j, "output_dir");
    cfg.write_json = cfg.write_csv = false;
    for (const auto& fmt : json_at(j, "formats")) {
        std::string name = fmt.get<std::string>();
        if (name == "json") cfg.write_json = true;
        else if (name == "csv") cfg.write_csv = true;
        else throw ParseError("unknown format '" + name + "' (expected json|csv)");
    }
    return cfg;
}

struct ExperimentOutcome {
    bool converged = false;
    long long steps_to_converge = 0;
    long long verify_violations = 0;
    std::string dataset_path;
    std::string weights_path;
    std::string trace_json_path;
    std::string trace_csv_path;
};

// Trace files record the training parameters they were produced with, so the
// bounds command can recompute constants without guessing.
inline json trace_file_json(const TrainingTrace& trace, ProblemMode mode,
                            const TrainConfig& cfg, bool use_bias) {
    json out = trace_to_json(trace, mode);
    out["train"] = json{{"C", cfg.C}, {"k", cfg.k}, {"use_bias", use_bias}};
    return out;
}

// Full gen -> train -> verify pipeline into output_dir. Deterministic given
// the config; returns the outcome instead of throwing on non-convergence so
// callers can map it onto their own status reporting.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir);
    auto path_in_dir = [&](const char* name) {
        return (fs::path(cfg.output_dir) / name).string();
    };

    ExperimentOutcome outcome;
    outcome.dataset_path = path_in_dir("dataset.json");
    outcome.weights_path = path_in_dir("weights.json");

    TrainingTrace trace;
    if (cfg.mode == ProblemMode::real) {
        RealDataset ds{cfg.gen, gen_real(cfg.gen)};
        write_text_file(outcome.dataset_path, dump_json(dataset_to_json(ds, cfg.strip_hidden)));
        RealTrainResult result =
            real_perceptron_train(ds.problem, nullptr, cfg.train.max_epochs);
        trace = result.trace;
        RealWeightsFile wf{result.a, trace.converged, trace.steps_to_converge};
        write_text_file(outcome.weights_path, dump_json(weights_to_json(wf)));
        outcome.verify_violations = verify_real(ds.problem, result.a).violations;
    } else if (cfg.mode == ProblemMode::complex_mvn) {
        ComplexDataset ds = gen_ksep_complex(cfg.gen);
        write_text_file(outcome.dataset_path, dump_json(dataset_to_json(ds, cfg.strip_hidden)));
        TrainConfig tc = cfg.train;
        tc.k = cfg.gen.k;
        ComplexTrainResult result = mvn_train_complex(ds.samples, tc);
        trace = result.trace;
        ComplexWeightsFile wf{tc.k, result.weights, trace.converged, trace.steps_to_converge};
        write_text_file(outcome.weights_path, dump_json(weights_to_json(wf)));
        outcome.verify_violations = verify_complex(ds.samples, result.weights, tc.k).violations;
    } else {
        BicomplexDataset ds = gen_ksep_bc(cfg.gen);
        write_text_file(outcome.dataset_path, dump_json(dataset_to_json(ds, cfg.strip_hidden)));
        TrainConfig tc = cfg.train;
        tc.k = cfg.gen.k;
        BicomplexTrainResult result = mvn_train_bc(ds.samples, tc);
        trace = result.trace;
        BicomplexWeightsFile wf{tc.k,           result.weights, trace.converged,
                                trace.steps_to_converge, trace.n1,       trace.n2};
        write_text_file(outcome.weights_path, dump_json(weights_to_json(wf)));
        outcome.verify_violations = verify_bc(ds.samples, result.weights, tc.k).violations;
    }

    TrainConfig tc = cfg.train;
    if (cfg.mode != ProblemMode::real) tc.k = cfg.gen.k;
    if (cfg.write_json) {
        outcome.trace_json_path = path_in_dir("trace.json");
        write_text_file(outcome.trace_json_path,
                        dump_json(trace_file_json(trace, cfg.mode, tc, true)));
    }
    if (cfg.write_csv) {
        outcome.trace_csv_path = path_in_dir("trace.csv");
        write_text_file(outcome.trace_csv_path, trace_to_csv(trace, cfg.mode));
    }
    outcome.converged = trace.converged;
    outcome.steps_to_converge = trace.steps_to_converge;
    return outcome;
}

}  // namespace bcmvn
