// Command-line front end: seeded dataset generation, training, verification,
// and bound checking for the real / complex / bicomplex sector perceptrons.
//
// Exit codes: 0 success, 2 training did not converge, 3 parse/config error,
// 1 any other failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "bcmvn/experiment.hpp"

namespace fs = std::filesystem;
using namespace bcmvn;

namespace {

std::optional<std::uint64_t> env_seed_override() {
    const char* raw = std::getenv("BCMVN_SEED");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    unsigned long long value = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0')
        throw ParseError(std::string("BCMVN_SEED is not an integer: '") + raw + "'");
    return static_cast<std::uint64_t>(value);
}

std::string hyp_norm_string(double n1, double n2) {
    return format_double17(n1) + "*e1 + " + format_double17(n2) + "*e2";
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
    std::string mode = "complex";
    GenSpec spec;
    std::string out = "dataset.json";
    bool no_hidden = false;
};

int cmd_gen(const GenArgs& args) {
    GenSpec spec = args.spec;
    if (auto seed = env_seed_override()) spec.seed = *seed;
    ProblemMode mode = mode_from_name(args.mode);

    int audit_violations = 0;
    if (mode == ProblemMode::real) {
        RealDataset ds{spec, gen_real(spec)};
        audit_violations = audit_real(ds.problem);
        write_text_file(args.out, dump_json(dataset_to_json(ds, args.no_hidden)));
    } else if (mode == ProblemMode::complex_mvn) {
        ComplexDataset ds = gen_ksep_complex(spec);
        audit_violations = audit_complex(ds);
        write_text_file(args.out, dump_json(dataset_to_json(ds, args.no_hidden)));
    } else {
        BicomplexDataset ds = gen_ksep_bc(spec);
        audit_violations = audit_bc(ds);
        write_text_file(args.out, dump_json(dataset_to_json(ds, args.no_hidden)));
    }
    std::cout << "dataset written to " << args.out << "\n";
    if (audit_violations == 0) {
        std::cout << "audit PASS (0 violations)\n";
        return exit_ok;
    }
    std::cout << "audit FAIL (" << audit_violations << " violations)\n";
    return exit_failure;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string dataset;
    std::string out_dir = ".";
    double C = 1.0;
    int max_epochs = 10000;
    int k_override = 0;  // 0: use the dataset's k
    std::string rule_form = "idempotent";
    std::vector<std::string> formats = {"json", "csv"};
    bool no_bias = false;
};

int cmd_train(const TrainArgs& args) {
    AnyDataset any = load_dataset(args.dataset);
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + args.out_dir);
    auto out_path = [&](const char* name) { return (fs::path(args.out_dir) / name).string(); };

    bool want_json = false, want_csv = false;
    for (const auto& fmt : args.formats) {
        if (fmt == "json") want_json = true;
        else if (fmt == "csv") want_csv = true;
        else throw ParseError("unknown trace format '" + fmt + "' (expected json|csv)");
    }

    TrainConfig cfg;
    cfg.C = args.C;
    cfg.max_epochs = args.max_epochs;
    cfg.rule_form = rule_form_from_name(args.rule_form);

    TrainingTrace trace;
    ProblemMode mode;
    std::string final_norm;

    if (std::holds_alternative<RealDataset>(any)) {
        mode = ProblemMode::real;
        const RealDataset& ds = std::get<RealDataset>(any);
        RealTrainResult result = real_perceptron_train(ds.problem, nullptr, cfg.max_epochs);
        trace = result.trace;
        RealWeightsFile wf{result.a, trace.converged, trace.steps_to_converge};
        write_text_file(out_path("weights.json"), dump_json(weights_to_json(wf)));
        final_norm = format_double17(vector_norm(result.a));
    } else if (std::holds_alternative<ComplexDataset>(any)) {
        mode = ProblemMode::complex_mvn;
        const ComplexDataset& ds = std::get<ComplexDataset>(any);
        cfg.k = args.k_override > 0 ? args.k_override : ds.spec.k;
        ComplexTrainOptions opts;
        if (args.no_bias) {
            ComplexWeights init;
            init.w.assign(ds.samples.empty() ? 0 : ds.samples[0].x.size(), {0.0, 0.0});
            init.use_bias = false;
            opts.initial = init;
        }
        ComplexTrainResult result = mvn_train_complex(ds.samples, cfg, opts);
        trace = result.trace;
        ComplexWeightsFile wf{cfg.k, result.weights, trace.converged, trace.steps_to_converge};
        write_text_file(out_path("weights.json"), dump_json(weights_to_json(wf)));
        final_norm = format_double17(result.weights.augmented_norm());
    } else {
        mode = ProblemMode::bicomplex_mvn;
        const BicomplexDataset& ds = std::get<BicomplexDataset>(any);
        cfg.k = args.k_override > 0 ? args.k_override : ds.spec.k;
        BicomplexTrainOptions opts;
        if (args.no_bias) {
            BicomplexWeights init;
            init.w.assign(ds.samples.empty() ? 0 : ds.samples[0].x.size(), Bicomplex{});
            init.use_bias = false;
            opts.initial = init;
        }
        BicomplexTrainResult result = mvn_train_bc(ds.samples, cfg, opts);
        trace = result.trace;
        BicomplexWeightsFile wf{cfg.k,           result.weights, trace.converged,
                                trace.steps_to_converge, trace.n1,       trace.n2};
        write_text_file(out_path("weights.json"), dump_json(weights_to_json(wf)));
        auto [n1, n2] = result.weights.slot_norms();
        final_norm = hyp_norm_string(n1, n2);
    }

    if (want_json)
        write_text_file(out_path("trace.json"),
                        dump_json(trace_file_json(trace, mode, cfg, !args.no_bias)));
    if (want_csv) write_text_file(out_path("trace.csv"), trace_to_csv(trace, mode));

    std::cout << "steps_to_converge=" << trace.steps_to_converge << " final_norm="
              << final_norm << " converged=" << (trace.converged ? "true" : "false") << "\n";
    if (!trace.converged) {
        std::cout << "not converged: best epoch had " << trace.best_epoch_misclassified()
                  << " misclassified (epoch budget " << cfg.max_epochs << ")\n";
        return exit_not_converged;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string dataset;
    std::string weights;
};

int cmd_verify(const VerifyArgs& args) {
    AnyDataset any_ds = load_dataset(args.dataset);
    AnyWeights any_w = load_weights(args.weights);

    VerifyReport report;
    if (std::holds_alternative<RealDataset>(any_ds)) {
        if (!std::holds_alternative<RealWeightsFile>(any_w))
            throw ParseError("verify: dataset is real but weights are not");
        report = verify_real(std::get<RealDataset>(any_ds).problem,
                             std::get<RealWeightsFile>(any_w).a);
    } else if (std::holds_alternative<ComplexDataset>(any_ds)) {
        if (!std::holds_alternative<ComplexWeightsFile>(any_w))
            throw ParseError("verify: dataset is complex but weights are not");
        const auto& wf = std::get<ComplexWeightsFile>(any_w);
        report = verify_complex(std::get<ComplexDataset>(any_ds).samples, wf.weights, wf.k);
    } else {
        if (!std::holds_alternative<BicomplexWeightsFile>(any_w))
            throw ParseError("verify: dataset is bicomplex but weights are not");
        const auto& wf = std::get<BicomplexWeightsFile>(any_w);
        report = verify_bc(std::get<BicomplexDataset>(any_ds).samples, wf.weights, wf.k);
        if (report.decomposition_mismatches > 0)
            std::cout << "decomposition mismatches: " << report.decomposition_mismatches
                      << "\n";
    }
    for (const auto& line : report.lines) std::cout << line << "\n";
    std::cout << "checked=" << report.checked << " violations=" << report.violations
              << " zero_arguments=" << report.zero_arguments << "\n";
    return report.clean() ? exit_ok : exit_failure;
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

struct BoundsArgs {
    std::string dataset;
    std::string trace;
};

void print_complex_bounds(const char* label, const ComplexBoundsReport& report) {
    std::cout << label << " upper bound |W_t|^2 <= t*M_bound: "
              << (report.upper_pass ? "PASS" : "FAIL") << " (M_bound="
              << format_double17(report.m_bound) << ", violations=" << report.upper_violations
              << ", worst_ratio=" << format_double17(report.worst_upper_ratio) << ")\n";
    std::cout << label << " lower bound |W_t| >= m*t/|W_hidden|: "
              << (report.lower_pass ? "PASS" : "FAIL") << " (m=" << format_double17(report.m)
              << ", |W_hidden|=" << format_double17(report.hidden_norm)
              << ", violations=" << report.lower_violations << ")\n";
}

int cmd_bounds(const BoundsArgs& args) {
    AnyDataset any_ds = load_dataset(args.dataset);
    TraceFile tf = load_trace(args.trace);

    bool pass = true;
    if (std::holds_alternative<RealDataset>(any_ds)) {
        if (tf.mode != ProblemMode::real) throw ParseError("bounds: trace/dataset mode mismatch");
        RealBoundsReport report =
            bounds_real(std::get<RealDataset>(any_ds).problem, tf.trace);
        std::cout << "mistake bound M+1 <= ceil(1/delta^2): "
                  << (report.pass ? "PASS" : "FAIL") << " (M=" << report.updates
                  << ", delta=" << format_double17(report.delta) << ", limit=" << report.limit
                  << ")\n";
        pass = report.pass;
    } else if (std::holds_alternative<ComplexDataset>(any_ds)) {
        if (tf.mode != ProblemMode::complex_mvn)
            throw ParseError("bounds: trace/dataset mode mismatch");
        const ComplexDataset& ds = std::get<ComplexDataset>(any_ds);
        int k = tf.has_train && tf.k > 0 ? tf.k : ds.spec.k;
        ComplexBoundsReport report = bounds_complex(ds, tf.trace, tf.C, tf.use_bias, k);
        print_complex_bounds("complex", report);
        pass = report.upper_pass && report.lower_pass;
    } else {
        if (tf.mode != ProblemMode::bicomplex_mvn)
            throw ParseError("bounds: trace/dataset mode mismatch");
        const BicomplexDataset& ds = std::get<BicomplexDataset>(any_ds);
        int k = tf.has_train && tf.k > 0 ? tf.k : ds.spec.k;
        BicomplexBoundsReport report = bounds_bc(ds, tf.trace, tf.C, tf.use_bias, k);
        print_complex_bounds("slot1", report.slot1);
        print_complex_bounds("slot2", report.slot2);
        pass = report.pass();
    }
    return pass ? exit_ok : exit_failure;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunArgs {
    std::string config;
    int trials = 1;
};

int cmd_run(const RunArgs& args) {
    ExperimentConfig base =
        experimentconfig_from_json(parse_json_text(read_text_file(args.config),
                                                   "config " + args.config));
    if (auto seed = env_seed_override()) base.gen.seed = *seed;
    if (args.trials < 1) throw ParseError("run: --trials must be >= 1");

    bool all_converged = true, all_clean = true;
    for (int trial = 0; trial < args.trials; ++trial) {
        ExperimentConfig cfg = base;
        if (args.trials > 1) {
            if (trial > 0) cfg.gen.seed = derive_subseed(base.gen.seed, trial);
            cfg.output_dir =
                (fs::path(base.output_dir) / ("trial_" + std::to_string(trial))).string();
        }
        ExperimentOutcome outcome = run_experiment(cfg);
        std::cout << "trial " << trial << ": seed=" << cfg.gen.seed << " converged="
                  << (outcome.converged ? "true" : "false")
                  << " steps=" << outcome.steps_to_converge
                  << " verify_violations=" << outcome.verify_violations << "\n";
        all_converged = all_converged && outcome.converged;
        all_clean = all_clean && outcome.verify_violations == 0;
    }
    if (!all_converged) return exit_not_converged;
    return all_clean ? exit_ok : exit_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"seeded generation, training, verification and bound checks for "
                 "real/complex/bicomplex sector perceptrons"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a separable dataset");
    gen->add_option("--mode", gen_args.mode, "real|complex|bicomplex")->required();
    gen->add_option("--n", gen_args.spec.n, "input dimension")->required();
    gen->add_option("--k", gen_args.spec.k, "number of sectors (ignored for real mode)");
    gen->add_option("--count", gen_args.spec.count, "number of samples")->required();
    gen->add_option("--margin", gen_args.spec.margin,
                    "angular margin in radians (real mode: linear margin in (0,1))")
        ->required();
    gen->add_option("--seed", gen_args.spec.seed, "64-bit generation seed");
    gen->add_option("--r-min", gen_args.spec.r_min, "minimum sample magnitude");
    gen->add_option("--r-max", gen_args.spec.r_max, "maximum sample magnitude");
    gen->add_option("--out", gen_args.out, "output dataset path");
    gen->add_flag("--no-hidden", gen_args.no_hidden,
                  "strip the hidden separator from the output");

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "train on a dataset file");
    train->add_option("--dataset", train_args.dataset, "dataset JSON path")->required();
    train->add_option("--out-dir", train_args.out_dir, "directory for weights/trace files");
    train->add_option("--C", train_args.C, "learning-rate scale");
    train->add_option("--max-epochs", train_args.max_epochs, "epoch budget (0: none)");
    train->add_option("--k", train_args.k_override, "override the dataset's sector count");
    train->add_option("--rule-form", train_args.rule_form,
                      "bicomplex update form: idempotent|direct");
    train->add_option("--formats", train_args.formats, "trace formats (json, csv)")
        ->delimiter(',');
    train->add_flag("--no-bias", train_args.no_bias, "train without a bias term");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "recompute activations against labels");
    verify->add_option("--dataset", verify_args.dataset, "dataset JSON path")->required();
    verify->add_option("--weights", verify_args.weights, "weights JSON path")->required();

    BoundsArgs bounds_args;
    CLI::App* bounds = app.add_subcommand("bounds", "check mistake/norm bounds from a trace");
    bounds->add_option("--dataset", bounds_args.dataset, "dataset JSON path (needs hidden)")
        ->required();
    bounds->add_option("--trace", bounds_args.trace, "trace JSON path")->required();

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "gen + train + verify from a config file");
    run->add_option("--config", run_args.config, "experiment config JSON")->required();
    run->add_option("--trials", run_args.trials, "number of independent seeded trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_parse;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_args);
        if (train->parsed()) return cmd_train(train_args);
        if (verify->parsed()) return cmd_verify(verify_args);
        if (bounds->parsed()) return cmd_bounds(bounds_args);
        if (run->parsed()) return cmd_run(run_args);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const NotConverged& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return exit_not_converged;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_failure;
}
