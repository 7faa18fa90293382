#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ringbif/model.hpp"
#include "ringbif/steady_states.hpp"

namespace ringbif {

struct ContinuationControls {
    double ds_init = 1e-2;
    double ds_min = 1e-6;
    double ds_max = 0.1;
    int max_steps = 20'000;

    double corrector_tol = 1e-11;
    int corrector_max_iter = 10;

    // Step is rejected when a sorted real part moves by more than
    // max_eig_change * (1 + |Re|) in one step.
    double max_eig_change = 0.25;

    double special_tol = 1e-8;  // |test function| at refined special points
    double switch_eps = 0.0;    // 0: (1e-3, or 2e-2 for a 2-D kernel) * (1 + ||state||)
    double dedup_tol = 1e-6;
    double max_state_norm = 1e4;

    // build_diagram only
    int max_branches = 100;
    std::vector<double> sample_fractions{0.25, 0.5, 0.75, 1.0};
    SearchConfig search{};
};

enum class SpecialKind { BranchPoint, LimitPoint, Unclassified };

[[nodiscard]] std::string to_string(SpecialKind kind);

struct SpecialPoint {
    SpecialKind kind = SpecialKind::BranchPoint;
    double r = 0.0;
    Vector state;
    Vector null_direction;            // unit, spans (part of) the Jacobian kernel
    std::vector<Vector> kernel;       // orthonormal near-kernel of the Jacobian
    Vector tangent;                   // branch tangent (x..., r), unit
    std::complex<double> critical{};  // eigenvalue nearest the imaginary axis
    double test_value = 0.0;          // refined |Re critical| (BP) or |dr/ds| (LP)
    std::string diagnostic;
};

struct BranchPointEntry {
    double r = 0.0;
    Vector state;
    Stability stability = Stability::Marginal;
    double leading_real = 0.0;
    int unstable_count = 0;
    double tangent_r = 0.0;  // dr/ds, oriented along point order
};

struct Branch {
    std::vector<BranchPointEntry> points;
    std::vector<SpecialPoint> special_points;
    int accepted_steps = 0;
    int rejected_steps = 0;
    bool truncated = false;
    std::string diagnostic;
    std::string origin;
};

/// Pseudo-arclength continuation in r at fixed p, starting from `start` at
/// model.r and traced in both directions until r leaves [r_lo, r_hi].
/// Tangent predictor, bordered Newton corrector with the arclength row,
/// adaptive step. Special points are detected before returning.
[[nodiscard]] Branch trace(const ModelSpec& model, const Vector& start, double r_lo, double r_hi,
                           const ContinuationControls& controls = {});

/// Scans consecutive branch points for flips of dr/ds (limit points) and
/// changes in the number of eigenvalues with positive real part (branch
/// points); each candidate is bisected on arclength.
[[nodiscard]] std::vector<SpecialPoint> detect_special_points(const ModelSpec& model, const Branch& branch,
                                                              const ContinuationControls& controls = {});

/// New half-branches leaving a branch point along its kernel directions.
/// Each one is traced away from the point until the r range is exhausted.
[[nodiscard]] std::vector<Branch> branch_switch(const ModelSpec& model, const SpecialPoint& bp, double r_lo,
                                                double r_hi, const ContinuationControls& controls = {});

struct Diagram {
    ModelKind kind = ModelKind::NormalFormRing;
    int n = 3;
    double p = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    std::vector<Branch> branches;
    bool truncated = false;

    /// Distinct special points of one kind across all branches.
    [[nodiscard]] std::vector<SpecialPoint> special_points(SpecialKind kind, double tol = 1e-6) const;
};

/// Seeds from synchronous states at both ends of the range and from
/// find_all at sampled r values, then recursively switches at every branch
/// point until no new branch appears (or max_branches is hit).
[[nodiscard]] Diagram build_diagram(ModelKind kind, int n, double p, double r_lo, double r_hi,
                                    const ContinuationControls& controls = {});

/// Distance from (state, r) to the branch curve: nearest polyline segment,
/// then an exact corrector projection when the point is close.
[[nodiscard]] double distance_to_branch(const ModelSpec& model, const Branch& branch, std::span<const double> state,
                                        double r, const ContinuationControls& controls = {});

}  // namespace ringbif
