#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bcmvn/activation.hpp"
#include "bcmvn/errors.hpp"
#include "bcmvn/perceptron.hpp"
#include "bcmvn/rng.hpp"
#include "bcmvn/vectors.hpp"

namespace bcmvn {

// Parameters of a synthetic separable dataset. `margin` is the angular
// margin in radians from the sector boundaries for complex/bicomplex specs,
// or the linear margin delta for real ones.
struct GenSpec {
    int n = 2;
    int k = 2;
    int count = 10;
    double margin = 0.1;
    std::uint64_t seed = 0;
    double r_min = 0.5;  // sample magnitudes stay in [r_min, r_max] so the
    double r_max = 2.0;  // boundedness constant of the mistake bounds is finite
};

enum class ProblemMode { real, complex_mvn, bicomplex_mvn };

inline void validate_genspec(const GenSpec& spec, ProblemMode mode) {
    if (spec.n < 1) throw ParseError("gen spec: dimension n must be >= 1");
    if (spec.count < 1) throw ParseError("gen spec: count must be >= 1");
    if (!(spec.r_min > 0.0)) throw ParseError("gen spec: r_min must be > 0");
    if (!(spec.r_max >= spec.r_min)) throw ParseError("gen spec: r_max must be >= r_min");
    if (mode == ProblemMode::real) {
        if (!(spec.margin > 0.0 && spec.margin < 1.0))
            throw ParseError("gen spec: real margin must lie in (0, 1)");
    } else {
        if (spec.k < 2) throw ParseError("gen spec: k must be >= 2");
        double sector_width = two_pi_const / spec.k;
        if (!(spec.margin > 0.0 && spec.margin < sector_width / 2.0))
            throw ParseError("gen spec: angular margin must lie in (0, pi/k)");
    }
}

namespace detail {

// Rejection-sampling stall detector: fewer than 0.1% acceptances over a
// 10000-attempt window aborts generation.
class StallGuard {
  public:
    void attempt() {
        ++attempts_;
        if (attempts_ == window_) {
            if (accepted_ * 1000 < window_)
                throw GenerationStalled(
                    "generation stalled: " + std::to_string(accepted_) + " acceptances in " +
                    std::to_string(window_) + " attempts (margin too demanding)");
            attempts_ = 0;
            accepted_ = 0;
        }
    }
    void accept() { ++accepted_; }

  private:
    int attempts_ = 0;
    int accepted_ = 0;
    static constexpr int window_ = 10000;
};

inline std::vector<double> unit_direction_real(Rng& rng, int n) {
    std::vector<double> v(n);
    double norm = 0.0;
    do {
        for (auto& c : v) c = rng.normal();
        norm = vector_norm(v);
    } while (norm == 0.0);
    for (auto& c : v) c /= norm;
    return v;
}

inline ComplexVector unit_direction_complex(Rng& rng, int n) {
    ComplexVector v(n);
    double norm = 0.0;
    do {
        for (auto& c : v) c = rng.complex_normal();
        norm = vector_norm(v);
    } while (norm == 0.0);
    for (auto& c : v) c /= norm;
    return v;
}

}  // namespace detail

// Real margin-delta problem: hidden unit separator a, samples drawn on
// spheres of radius in [r_min, r_max] and kept only when both |a.x| >= delta
// and |a.x|/||x|| >= delta, labelled by sign(a.x).
inline RealSeparableProblem gen_real(const GenSpec& spec) {
    validate_genspec(spec, ProblemMode::real);
    Rng rng(spec.seed);
    RealSeparableProblem problem;
    problem.hidden_a = detail::unit_direction_real(rng, spec.n);
    problem.hidden_delta = spec.margin;
    problem.has_hidden = true;

    detail::StallGuard guard;
    while (static_cast<int>(problem.samples.size()) < spec.count) {
        guard.attempt();
        std::vector<double> x = detail::unit_direction_real(rng, spec.n);
        double radius = rng.uniform(spec.r_min, spec.r_max);
        double dot = 0.0;
        for (int d = 0; d < spec.n; ++d) {
            x[d] *= radius;
            dot += problem.hidden_a[d] * x[d];
        }
        if (std::abs(dot) < spec.margin) continue;            // absolute margin
        if (std::abs(dot) / radius < spec.margin) continue;   // normalized margin
        guard.accept();
        problem.samples.push_back({std::move(x), dot > 0.0 ? +1 : -1});
    }
    return problem;
}

struct RealDataset {
    GenSpec spec;
    RealSeparableProblem problem;
};

struct ComplexDataset {
    GenSpec spec;
    std::vector<ComplexSample> samples;
    bool has_hidden = false;
    ComplexVector hidden_w;
};

struct BicomplexDataset {
    GenSpec spec;
    std::vector<BicomplexSample> samples;
    bool has_hidden = false;
    BicomplexVector hidden_w;
};

// k-separable complex dataset: hidden weights with unit-modulus entries,
// samples kept only when the hidden weighted sum stays `margin` radians away
// from every sector boundary (and safely off the origin), labelled by its
// sector. The hidden weighting uses bias 0.
inline ComplexDataset gen_ksep_complex(const GenSpec& spec) {
    validate_genspec(spec, ProblemMode::complex_mvn);
    Rng rng(spec.seed);
    SectorConfig sc(spec.k);
    ComplexDataset out;
    out.spec = spec;
    out.has_hidden = true;
    out.hidden_w.resize(spec.n);
    for (auto& w : out.hidden_w) w = rng.unit_complex();

    const double sector_width = two_pi_const / spec.k;
    detail::StallGuard guard;
    while (static_cast<int>(out.samples.size()) < spec.count) {
        guard.attempt();
        ComplexVector x = detail::unit_direction_complex(rng, spec.n);
        double radius = rng.uniform(spec.r_min, spec.r_max);
        for (auto& c : x) c *= radius;
        std::complex<double> z = weighted_sum_complex({0.0, 0.0}, out.hidden_w, x);
        if (std::abs(z) < 1e-9) continue;  // keep the activation well-defined
        double offset = std::fmod(arg_two_pi(z), sector_width);
        if (offset < spec.margin || offset > sector_width - spec.margin) continue;
        guard.accept();
        out.samples.push_back({std::move(x), sector_index(z, sc)});
    }
    return out;
}

// Slotwise k-separable bicomplex dataset: two independent complex datasets,
// generated from documented sub-seeds, composed entrywise into the
// idempotent slots. Labels are the per-slot sector pairs.
inline BicomplexDataset gen_ksep_bc(const GenSpec& spec) {
    validate_genspec(spec, ProblemMode::bicomplex_mvn);
    GenSpec slot_spec = spec;
    slot_spec.seed = derive_subseed(spec.seed, 0);
    ComplexDataset first = gen_ksep_complex(slot_spec);
    slot_spec.seed = derive_subseed(spec.seed, 1);
    ComplexDataset second = gen_ksep_complex(slot_spec);

    BicomplexDataset out;
    out.spec = spec;
    out.has_hidden = true;
    out.hidden_w.resize(spec.n);
    for (int d = 0; d < spec.n; ++d)
        out.hidden_w[d] = idempotent_compose(first.hidden_w[d], second.hidden_w[d]);
    out.samples.reserve(spec.count);
    for (int s = 0; s < spec.count; ++s) {
        BicomplexSample smp;
        smp.x = compose_vector(first.samples[s].x, second.samples[s].x);
        smp.q1 = first.samples[s].q;
        smp.q2 = second.samples[s].q;
        out.samples.push_back(std::move(smp));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Separability audits: re-evaluate the activation under the hidden weights
// and count label disagreements (zero expected by construction).
// ---------------------------------------------------------------------------

inline int audit_real(const RealSeparableProblem& problem, double* worst_margin = nullptr) {
    if (!problem.has_hidden)
        throw MissingHidden("audit_real: dataset carries no hidden separator");
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& smp : problem.samples) {
        double dot = 0.0;
        for (std::size_t d = 0; d < smp.x.size(); ++d) dot += problem.hidden_a[d] * smp.x[d];
        int predicted = dot > 0.0 ? +1 : (dot < 0.0 ? -1 : 0);
        if (predicted != smp.cls || std::abs(dot) < problem.hidden_delta) ++violations;
        worst = std::min(worst, std::abs(dot));
    }
    if (worst_margin) *worst_margin = worst;
    return violations;
}

inline int audit_complex(const ComplexDataset& dataset) {
    if (!dataset.has_hidden)
        throw MissingHidden("audit_complex: dataset carries no hidden weights");
    SectorConfig sc(dataset.spec.k);
    int violations = 0;
    for (const auto& smp : dataset.samples) {
        std::complex<double> z = weighted_sum_complex({0.0, 0.0}, dataset.hidden_w, smp.x);
        if (sector_or_sentinel(z, sc) != smp.q) ++violations;
    }
    return violations;
}

inline int audit_bc(const BicomplexDataset& dataset) {
    if (!dataset.has_hidden)
        throw MissingHidden("audit_bc: dataset carries no hidden weights");
    SectorConfig sc(dataset.spec.k);
    int violations = 0;
    for (const auto& smp : dataset.samples) {
        Bicomplex z = weighted_sum_bc(Bicomplex{}, dataset.hidden_w, smp.x);
        IdempotentParts p = idempotent_decompose(z);
        if (sector_or_sentinel(p.l1, sc) != smp.q1) ++violations;
        if (sector_or_sentinel(p.l2, sc) != smp.q2) ++violations;
    }
    return violations;
}

}  // namespace bcmvn
