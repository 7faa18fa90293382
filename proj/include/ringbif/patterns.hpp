#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ringbif/model.hpp"
#include "ringbif/numerics/ode.hpp"

namespace ringbif {

/// Symbolic description of a ring state. "A"/"-A" mark cells at the
/// synchronous value +-sqrt(r + p); other cells get lowercase letters by
/// descending magnitude ('-' prefix when negative), "0" for cells at zero.
/// Symbols are rotated to the lexicographically smallest cyclic rotation.
struct PatternSignature {
    std::vector<std::string> symbols;
    Vector representative;

    [[nodiscard]] bool homogeneous() const;
    [[nodiscard]] std::string text() const;  // "(A,A,A,A)"

    friend bool operator==(const PatternSignature& a, const PatternSignature& b) { return a.symbols == b.symbols; }
    friend bool operator<(const PatternSignature& a, const PatternSignature& b) { return a.symbols < b.symbols; }
};

constexpr double kSyncLabelTol = 1e-6;
constexpr double kClusterGap = 1e-4;

[[nodiscard]] PatternSignature classify(std::span<const double> state, double r, double p,
                                        double tol = kSyncLabelTol);

struct PatternEntry {
    PatternSignature signature;
    long count = 0;
    double percentage = 0.0;  // of converged samples
    long marginal = 0;        // samples that ended on a Marginal state
};

struct PatternDistribution {
    ModelSpec model;
    std::vector<PatternEntry> entries;  // by descending count, then symbols
    long total_samples = 0;
    long unconverged_count = 0;
    std::uint64_t rng_seed = 0;
    double ic_box = 0.0;
    bool mirrored = false;

    /// More than 0.1% of samples failed to reach a steady state.
    [[nodiscard]] bool flagged() const;
    [[nodiscard]] double homogeneous_percentage() const;
    [[nodiscard]] const PatternEntry* find(const std::string& text) const;
};

struct SampleOptions {
    IntegrationControls integration{};
    int threads = 1;      // 0: default_thread_count()
    bool mirror = false;  // negate every initial condition
};

/// Integrates num_samples initial conditions drawn uniformly from
/// [-h, h]^n (h <= 0 selects 2 sqrt(|r| + |p| + 1)) and tallies the
/// signatures of the terminal states. Sample k uses a generator derived from
/// (seed, k), so results do not depend on the thread count.
[[nodiscard]] PatternDistribution sample(const ModelSpec& model, long num_samples, double ic_box_half_width,
                                         std::uint64_t seed, const SampleOptions& options = {});

struct DominanceRow {
    double r = 0.0;
    double p = 0.0;
    double homogeneous = 0.0;    // percent
    double heterogeneous = 0.0;  // percent
};

struct DominanceCheck {
    std::string description;
    bool passed = false;
};

struct DominanceReport {
    std::vector<DominanceRow> rows;  // sorted by p, then r
    std::vector<DominanceCheck> checks;
    [[nodiscard]] bool all_passed() const;
};

/// Tabulates homogeneous against heterogeneous mass and checks the
/// orderings expected along an r ladder: for p > 0 the homogeneous share
/// does not grow with r, is a majority up to r = 2.5, a minority from r = 4,
/// and is the only outcome for r + p small enough that no heterogeneous
/// state is stable (r <= 0.2 here); for p < 0 and r >= 2.5 it is present
/// but a minority.
[[nodiscard]] DominanceReport dominance_report(const std::vector<PatternDistribution>& distributions);

}  // namespace ringbif
