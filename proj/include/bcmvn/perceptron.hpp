#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bcmvn/activation.hpp"
#include "bcmvn/bicomplex.hpp"
#include "bcmvn/errors.hpp"
#include "bcmvn/vectors.hpp"

namespace bcmvn {

enum class RuleForm { idempotent, direct };

struct TrainConfig {
    double C = 1.0;          // learning-rate scale, constant across steps
    int max_epochs = 10000;  // 0 means "no epochs": immediately not converged
    int k = 2;               // number of activation sectors
    std::uint64_t seed = 0;  // recorded for provenance; training is order-deterministic
    RuleForm rule_form = RuleForm::idempotent;  // bicomplex trainer only
};

// One fired (non-identity) weight update. For real and complex runs only
// (q1, s1, norm1) are meaningful; bicomplex runs carry both slots, and
// (norm1, norm2) are the idempotent components of the hyperbolic weight
// norm. s = -1 marks a zero weighted sum, where the actual sector is
// undefined and the correction uses the target root alone.
struct UpdateRecord {
    long long step = 0;  // 1-based global presentation counter
    int sample = 0;      // dataset index presented
    int q1 = 0, s1 = 0;
    int q2 = 0, s2 = 0;
    double norm1 = 0.0, norm2 = 0.0;
};

struct TrainingTrace {
    std::vector<UpdateRecord> updates;  // fired updates only
    std::vector<int> epochs;            // per-epoch misclassification counts
    bool converged = false;
    // Real/complex: number of fired updates. Bicomplex: max(n1, n2).
    long long steps_to_converge = 0;
    long long n1 = 0;  // slot-1 fired count (equals steps_to_converge off bicomplex)
    long long n2 = 0;

    int best_epoch_misclassified() const {
        if (epochs.empty()) return -1;
        return *std::min_element(epochs.begin(), epochs.end());
    }
};

inline void ensure_converged(const TrainingTrace& trace, const std::string& what) {
    if (!trace.converged)
        throw NotConverged(what + ": epoch budget exhausted (best epoch had " +
                               std::to_string(trace.best_epoch_misclassified()) +
                               " misclassified)",
                           trace.best_epoch_misclassified());
}

// ---------------------------------------------------------------------------
// Learning-rate condition
// ---------------------------------------------------------------------------

// Ratio sum(e(m)^2) / (sum(e(m)))^2 over m = 1..M. The online scheme is
// guaranteed to stabilize when this ratio tends to zero; constant rates give
// exactly 1/M, while e(m) = 2^m tends to 1/3 and therefore fails.
inline double rate_condition_check(const std::function<double(long long)>& rates,
                                   long long horizon) {
    if (horizon < 1) throw Error("rate_condition_check: horizon must be >= 1");
    double sum = 0.0, sum_sq = 0.0;
    for (long long m = 1; m <= horizon; ++m) {
        double e = rates(m);
        if (!(e > 0.0))
            throw NonPositiveRate("rate_condition_check: e(" + std::to_string(m) +
                                  ") = " + std::to_string(e));
        sum += e;
        sum_sq += e * e;
    }
    return sum_sq / (sum * sum);
}

// ---------------------------------------------------------------------------
// Real perceptron
// ---------------------------------------------------------------------------

struct RealSample {
    std::vector<double> x;
    int cls = +1;  // +1 or -1
};

struct RealSeparableProblem {
    std::vector<RealSample> samples;
    bool has_hidden = false;
    std::vector<double> hidden_a;  // unit separator, if known
    double hidden_delta = 0.0;     // margin: |a.x| >= delta for every sample
};

struct RealTrainResult {
    std::vector<double> a;
    TrainingTrace trace;
};

// Online sign perceptron with normalized steps a += cls * e(n) * x/||x||,
// cycling the sample list until an epoch fires no update. Initialized with
// the signed, normalized first sample (so the start state is itself a valid
// update step and the 1/delta^2 mistake bound applies to M + 1).
inline RealTrainResult real_perceptron_train(
    const RealSeparableProblem& problem,
    const std::function<double(long long)>& rates = nullptr, int max_epochs = 10000) {
    if (problem.samples.empty()) throw Error("real_perceptron_train: empty sample list");
    const std::size_t dim = problem.samples[0].x.size();
    std::vector<double> norms(problem.samples.size());
    for (std::size_t n = 0; n < problem.samples.size(); ++n) {
        require_same_length(problem.samples[n].x.size(), dim, "real_perceptron_train");
        norms[n] = vector_norm(problem.samples[n].x);
        if (norms[n] == 0.0) throw Error("real_perceptron_train: zero sample vector");
    }

    std::vector<double> a(dim);
    for (std::size_t d = 0; d < dim; ++d)
        a[d] = problem.samples[0].cls * problem.samples[0].x[d] / norms[0];

    TrainingTrace trace;
    long long step = 0, fired_total = 0;
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        int fired = 0;
        for (std::size_t n = 0; n < problem.samples.size(); ++n) {
            ++step;
            const RealSample& smp = problem.samples[n];
            double margin = 0.0;
            for (std::size_t d = 0; d < dim; ++d) margin += a[d] * smp.x[d];
            int predicted = margin > 0.0 ? +1 : (margin < 0.0 ? -1 : 0);
            if (predicted == smp.cls) continue;
            ++fired;
            ++fired_total;
            double e = 1.0;
            if (rates) {
                e = rates(fired_total);
                if (!(e > 0.0))
                    throw NonPositiveRate("real_perceptron_train: e(" +
                                          std::to_string(fired_total) + ") <= 0");
            }
            for (std::size_t d = 0; d < dim; ++d)
                a[d] += smp.cls * e * smp.x[d] / norms[n];
            UpdateRecord rec;
            rec.step = step;
            rec.sample = static_cast<int>(n);
            rec.q1 = smp.cls;
            rec.s1 = predicted;
            rec.norm1 = vector_norm(a);
            trace.updates.push_back(rec);
        }
        trace.epochs.push_back(fired);
        if (fired == 0) {
            trace.converged = true;
            break;
        }
    }
    trace.steps_to_converge = static_cast<long long>(trace.updates.size());
    trace.n1 = trace.n2 = trace.steps_to_converge;
    return {std::move(a), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Complex multi-valued neuron
// ---------------------------------------------------------------------------

struct ComplexSample {
    ComplexVector x;
    int q = 0;  // target sector in [0, k)
};

struct ComplexWeights {
    std::complex<double> w0{0.0, 0.0};
    ComplexVector w;
    bool use_bias = true;

    double augmented_norm() const {
        double acc = use_bias ? std::norm(w0) : 0.0;
        for (const auto& c : w) acc += std::norm(c);
        return std::sqrt(acc);
    }
};

// Actual sector of a weighted sum, with -1 standing for "undefined: the sum
// is (numerically) zero". A zero sum always counts as misclassified and its
// correction omits the actual-sector root.
inline int sector_or_sentinel(std::complex<double> z, const SectorConfig& cfg) {
    try {
        return sector_index(z, cfg);
    } catch (const ZeroArgument&) {
        return -1;
    }
}

struct MvnStepComplexResult {
    ComplexWeights weights;
    int s = -1;        // actual sector before the update (-1: zero sum)
    bool fired = false;
};

// One presentation of sample x with target sector q:
//   W   += C (eps^q - eps^s) conj(x)      (entrywise)
//   w0  += C (eps^q - eps^s)              (bias channel, constant input 1)
// and the identity update when s == q.
inline MvnStepComplexResult mvn_step_complex(const ComplexWeights& weights,
                                             const ComplexVector& x, int q,
                                             const TrainConfig& tc,
                                             const SectorConfig& sc) {
    require_same_length(weights.w.size(), x.size(), "mvn_step_complex");
    std::complex<double> z = weighted_sum_complex(weights.use_bias ? weights.w0
                                                                   : std::complex<double>{},
                                                  weights.w, x);
    int s = sector_or_sentinel(z, sc);
    if (s == q) return {weights, s, false};
    std::complex<double> d = unit_root(q, sc.k);
    if (s >= 0) d -= unit_root(s, sc.k);
    d *= tc.C;
    MvnStepComplexResult out{weights, s, true};
    for (std::size_t n = 0; n < x.size(); ++n) out.weights.w[n] += d * std::conj(x[n]);
    if (weights.use_bias) out.weights.w0 += d;
    return out;
}

struct ComplexTrainOptions {
    std::optional<ComplexWeights> initial;  // default: zero weights, bias on
};

struct ComplexTrainResult {
    ComplexWeights weights;
    TrainingTrace trace;
};

// Cycles the dataset in insertion order until a full epoch fires no update
// or the epoch budget runs out. Optionally captures the weights after every
// fired update into `snapshots`.
inline ComplexTrainResult mvn_train_complex(const std::vector<ComplexSample>& dataset,
                                            const TrainConfig& cfg,
                                            const ComplexTrainOptions& opts = {},
                                            std::vector<ComplexWeights>* snapshots = nullptr) {
    if (dataset.empty()) throw Error("mvn_train_complex: empty dataset");
    const std::size_t dim = dataset[0].x.size();
    for (const auto& smp : dataset)
        require_same_length(smp.x.size(), dim, "mvn_train_complex");

    ComplexWeights weights;
    if (opts.initial) weights = *opts.initial;
    else weights.w.assign(dim, {0.0, 0.0});
    require_same_length(weights.w.size(), dim, "mvn_train_complex: initial weights");

    SectorConfig sc(cfg.k);
    TrainingTrace trace;
    long long step = 0;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        int fired = 0;
        for (std::size_t n = 0; n < dataset.size(); ++n) {
            ++step;
            MvnStepComplexResult r = mvn_step_complex(weights, dataset[n].x, dataset[n].q,
                                                      cfg, sc);
            if (!r.fired) continue;
            ++fired;
            weights = std::move(r.weights);
            UpdateRecord rec;
            rec.step = step;
            rec.sample = static_cast<int>(n);
            rec.q1 = dataset[n].q;
            rec.s1 = r.s;
            rec.norm1 = weights.augmented_norm();
            trace.updates.push_back(rec);
            if (snapshots) snapshots->push_back(weights);
        }
        trace.epochs.push_back(fired);
        if (fired == 0) {
            trace.converged = true;
            break;
        }
    }
    trace.steps_to_converge = static_cast<long long>(trace.updates.size());
    trace.n1 = trace.n2 = trace.steps_to_converge;
    return {std::move(weights), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Bicomplex multi-valued neuron
// ---------------------------------------------------------------------------

struct BicomplexSample {
    BicomplexVector x;
    int q1 = 0;  // target sector of idempotent slot 1
    int q2 = 0;  // target sector of idempotent slot 2
};

struct BicomplexWeights {
    Bicomplex w0{};
    BicomplexVector w;
    bool use_bias = true;

    // Idempotent components of the hyperbolic weight norm (bias included).
    std::pair<double, double> slot_norms() const {
        double acc1 = 0.0, acc2 = 0.0;
        if (use_bias) {
            IdempotentParts b = idempotent_decompose(w0);
            acc1 = std::norm(b.l1);
            acc2 = std::norm(b.l2);
        }
        for (const auto& entry : w) {
            IdempotentParts p = idempotent_decompose(entry);
            acc1 += std::norm(p.l1);
            acc2 += std::norm(p.l2);
        }
        return {std::sqrt(acc1), std::sqrt(acc2)};
    }

    Hyperbolic hyperbolic_weight_norm() const {
        auto [n1, n2] = slot_norms();
        return Hyperbolic::from_st(n1, n2);
    }
};

struct MvnStepBCResult {
    BicomplexWeights weights;
    int s1 = -1, s2 = -1;
    bool fired = false;
};

namespace detail {

// Actual sectors of both idempotent slots of the weighted sum.
inline std::pair<int, int> bc_actual_sectors(const BicomplexWeights& weights,
                                             const BicomplexVector& x,
                                             const SectorConfig& sc) {
    Bicomplex z = weighted_sum_bc(weights.use_bias ? weights.w0 : Bicomplex{}, weights.w, x);
    IdempotentParts p = idempotent_decompose(z);
    return {sector_or_sentinel(p.l1, sc), sector_or_sentinel(p.l2, sc)};
}

// Per-slot correction roots d = eps^q - eps^s (zero for a clean slot, eps^q
// alone for an undefined one).
inline std::complex<double> correction_root(int q, int s, int k) {
    if (s == q) return {0.0, 0.0};
    std::complex<double> d = unit_root(q, k);
    if (s >= 0) d -= unit_root(s, k);
    return d;
}

}  // namespace detail

// One bicomplex presentation, computed slotwise: each idempotent slot of the
// weights receives the complex rule with its own (q, s) pair, and a slot
// whose actual sector already matches is left exactly unchanged.
inline MvnStepBCResult mvn_step_bc_idempotent(const BicomplexWeights& weights,
                                              const BicomplexVector& x, int q1, int q2,
                                              const TrainConfig& tc, const SectorConfig& sc) {
    require_same_length(weights.w.size(), x.size(), "mvn_step_bc_idempotent");
    auto [s1, s2] = detail::bc_actual_sectors(weights, x, sc);
    if (s1 == q1 && s2 == q2) return {weights, s1, s2, false};
    std::complex<double> d1 = tc.C * detail::correction_root(q1, s1, sc.k);
    std::complex<double> d2 = tc.C * detail::correction_root(q2, s2, sc.k);
    MvnStepBCResult out{weights, s1, s2, true};
    for (std::size_t n = 0; n < x.size(); ++n) {
        IdempotentParts pw = idempotent_decompose(weights.w[n]);
        IdempotentParts px = idempotent_decompose(x[n]);
        out.weights.w[n] = idempotent_compose(pw.l1 + d1 * std::conj(px.l1),
                                              pw.l2 + d2 * std::conj(px.l2));
    }
    if (weights.use_bias) {
        IdempotentParts b = idempotent_decompose(weights.w0);
        out.weights.w0 = idempotent_compose(b.l1 + d1, b.l2 + d2);
    }
    return out;
}

// Same update written as one bicomplex product: the correction coefficient
// xi = (C/2) [ (1+ij) (eps^q1 - eps^s1) + (1-ij) (eps^q2 - eps^s2) ]
// is built in cartesian coordinates and the weights move by xi * star(x)
// entrywise (star = slotwise complex conjugation), bias by xi. Agrees with
// the slotwise form on every input.
inline MvnStepBCResult mvn_step_bc_direct(const BicomplexWeights& weights,
                                          const BicomplexVector& x, int q1, int q2,
                                          const TrainConfig& tc, const SectorConfig& sc) {
    require_same_length(weights.w.size(), x.size(), "mvn_step_bc_direct");
    auto [s1, s2] = detail::bc_actual_sectors(weights, x, sc);
    if (s1 == q1 && s2 == q2) return {weights, s1, s2, false};
    std::complex<double> d1 = detail::correction_root(q1, s1, sc.k);
    std::complex<double> d2 = detail::correction_root(q2, s2, sc.k);
    // (1+ij)(a+bi) has cartesian components (a, b, -b, a); (1-ij)(a+bi) has
    // (a, b, b, -a). Summed and scaled by C/2:
    double half_c = 0.5 * tc.C;
    Bicomplex xi = Bicomplex::from_cartesian(half_c * (d1.real() + d2.real()),
                                             half_c * (d1.imag() + d2.imag()),
                                             half_c * (d2.imag() - d1.imag()),
                                             half_c * (d1.real() - d2.real()));
    MvnStepBCResult out{weights, s1, s2, true};
    for (std::size_t n = 0; n < x.size(); ++n)
        out.weights.w[n] = bc_add(weights.w[n], bc_mul(xi, conj_star(x[n])));
    if (weights.use_bias) out.weights.w0 = bc_add(weights.w0, xi);
    return out;
}

struct BicomplexTrainOptions {
    std::optional<BicomplexWeights> initial;
};

struct BicomplexTrainResult {
    BicomplexWeights weights;
    TrainingTrace trace;
};

// Joint bicomplex trainer: cycles the dataset until one full epoch leaves
// both slots clean. With rule_form == idempotent the slot weight vectors are
// kept decomposed between steps, so each slot's float trajectory is
// identical to an independent complex training run on that slot's data; the
// direct form keeps cartesian bicomplex state and applies the one-product
// rewrite. steps_to_converge = max(n1, n2) over the per-slot fired counts.
inline BicomplexTrainResult mvn_train_bc(const std::vector<BicomplexSample>& dataset,
                                         const TrainConfig& cfg,
                                         const BicomplexTrainOptions& opts = {},
                                         std::vector<BicomplexWeights>* snapshots = nullptr) {
    if (dataset.empty()) throw Error("mvn_train_bc: empty dataset");
    const std::size_t dim = dataset[0].x.size();
    for (const auto& smp : dataset) require_same_length(smp.x.size(), dim, "mvn_train_bc");

    BicomplexWeights weights;
    if (opts.initial) weights = *opts.initial;
    else weights.w.assign(dim, Bicomplex{});
    require_same_length(weights.w.size(), dim, "mvn_train_bc: initial weights");

    SectorConfig sc(cfg.k);
    TrainingTrace trace;

    const bool slotwise = cfg.rule_form == RuleForm::idempotent;
    // Decomposed state (idempotent form); kept across steps to avoid
    // compose/decompose round-off between presentations.
    ComplexWeights sw1, sw2;
    std::vector<ComplexVector> xs1, xs2;
    if (slotwise) {
        sw1.use_bias = sw2.use_bias = weights.use_bias;
        IdempotentParts b = idempotent_decompose(weights.w0);
        sw1.w0 = b.l1;
        sw2.w0 = b.l2;
        sw1.w.resize(dim);
        sw2.w.resize(dim);
        for (std::size_t n = 0; n < dim; ++n) {
            IdempotentParts p = idempotent_decompose(weights.w[n]);
            sw1.w[n] = p.l1;
            sw2.w[n] = p.l2;
        }
        xs1.reserve(dataset.size());
        xs2.reserve(dataset.size());
        for (const auto& smp : dataset) {
            xs1.push_back(slot1(smp.x));
            xs2.push_back(slot2(smp.x));
        }
    }
    auto compose_state = [&]() {
        if (!slotwise) return weights;
        BicomplexWeights out;
        out.use_bias = weights.use_bias;
        out.w0 = idempotent_compose(sw1.w0, sw2.w0);
        out.w.resize(dim);
        for (std::size_t n = 0; n < dim; ++n)
            out.w[n] = idempotent_compose(sw1.w[n], sw2.w[n]);
        return out;
    };

    long long step = 0;
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        int fired = 0;
        for (std::size_t n = 0; n < dataset.size(); ++n) {
            ++step;
            const BicomplexSample& smp = dataset[n];
            int s1, s2;
            if (slotwise) {
                std::complex<double> z1 = weighted_sum_complex(
                    sw1.use_bias ? sw1.w0 : std::complex<double>{}, sw1.w, xs1[n]);
                std::complex<double> z2 = weighted_sum_complex(
                    sw2.use_bias ? sw2.w0 : std::complex<double>{}, sw2.w, xs2[n]);
                s1 = sector_or_sentinel(z1, sc);
                s2 = sector_or_sentinel(z2, sc);
                if (s1 == smp.q1 && s2 == smp.q2) continue;
                std::complex<double> d1 = cfg.C * detail::correction_root(smp.q1, s1, sc.k);
                std::complex<double> d2 = cfg.C * detail::correction_root(smp.q2, s2, sc.k);
                for (std::size_t d = 0; d < dim; ++d) {
                    sw1.w[d] += d1 * std::conj(xs1[n][d]);
                    sw2.w[d] += d2 * std::conj(xs2[n][d]);
                }
                if (sw1.use_bias) {
                    sw1.w0 += d1;
                    sw2.w0 += d2;
                }
            } else {
                MvnStepBCResult r = mvn_step_bc_direct(weights, smp.x, smp.q1, smp.q2, cfg, sc);
                s1 = r.s1;
                s2 = r.s2;
                if (!r.fired) continue;
                weights = std::move(r.weights);
            }
            ++fired;
            if (s1 != smp.q1) ++trace.n1;
            if (s2 != smp.q2) ++trace.n2;
            UpdateRecord rec;
            rec.step = step;
            rec.sample = static_cast<int>(n);
            rec.q1 = smp.q1;
            rec.s1 = s1;
            rec.q2 = smp.q2;
            rec.s2 = s2;
            if (slotwise) {
                rec.norm1 = sw1.augmented_norm();
                rec.norm2 = sw2.augmented_norm();
            } else {
                auto [norm1, norm2] = weights.slot_norms();
                rec.norm1 = norm1;
                rec.norm2 = norm2;
            }
            trace.updates.push_back(rec);
            if (snapshots) snapshots->push_back(compose_state());
        }
        trace.epochs.push_back(fired);
        if (fired == 0) {
            trace.converged = true;
            break;
        }
    }
    trace.steps_to_converge = std::max(trace.n1, trace.n2);
    return {compose_state(), std::move(trace)};
}

}  // namespace bcmvn
