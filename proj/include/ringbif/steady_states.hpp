#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ringbif/model.hpp"
#include "ringbif/numerics/eigen.hpp"

namespace ringbif {

inline constexpr double kStabilityEps = 1e-7;
inline constexpr double kSynchronyTol = 1e-8;
inline constexpr double kSteadyResidualTol = 1e-9;

enum class Stability { Stable, Unstable, Marginal };
enum class Synchrony { Synchronous, Nonsynchronous };

[[nodiscard]] std::string to_string(Stability s);
[[nodiscard]] std::string to_string(Synchrony s);

/// Stable iff every real part < -eps, Unstable iff some real part > eps.
[[nodiscard]] Stability classify_stability(const Spectrum& spectrum, double eps = kStabilityEps);
[[nodiscard]] Synchrony classify_synchrony(const ModelSpec& model, std::span<const double> state,
                                           double tol = kSynchronyTol);

struct SteadyState {
    Vector state;
    double residual = 0.0;
    Spectrum spectrum;
    Stability stability = Stability::Marginal;
    Synchrony synchrony = Synchrony::Nonsynchronous;
    int orbit_id = -1;
};

/// Residual, spectrum and both classifications for a given state.
[[nodiscard]] SteadyState describe_state(const ModelSpec& model, Vector state);

struct SearchConfig {
    double box_half_width = 0.0;    // 0: 2 sqrt(|r| + |p| + 1)
    int grid_points_per_axis = -1;  // -1: largest grid with at most 2e4 points
    int random_starts = 10'000;
    double dedup_tol = 1e-6;
    std::uint64_t rng_seed = 0;
    int threads = 1;                // 0: default_thread_count()

    [[nodiscard]] double resolved_box(const ModelSpec& model) const;
    [[nodiscard]] int resolved_grid(const ModelSpec& model) const;
};

/// Lower/upper corner of the start box for each coordinate.
struct SearchBox {
    Vector lo;
    Vector hi;
};
[[nodiscard]] SearchBox search_box(const ModelSpec& model, const SearchConfig& config);

/// Approximate-membership index over state vectors with an infinity-norm
/// tolerance; buckets on the first coordinate.
class StateIndex {
public:
    explicit StateIndex(double tol) : tol_(tol) {}

    [[nodiscard]] std::optional<std::size_t> find(std::span<const double> state, double tol) const;
    [[nodiscard]] std::optional<std::size_t> find(std::span<const double> state) const { return find(state, tol_); }
    std::size_t insert(Vector state);

    [[nodiscard]] const std::vector<Vector>& states() const noexcept { return states_; }
    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }

private:
    [[nodiscard]] long long key(double v) const noexcept;

    double tol_;
    std::vector<Vector> states_;
    std::multimap<long long, std::size_t> buckets_;
};

/// Multistart Newton over a grid plus seeded random starts, deduplicated,
/// closed under the model's symmetry group and classified. Output is sorted
/// lexicographically by state and independent of the worker count.
[[nodiscard]] std::vector<SteadyState> find_all(const ModelSpec& model, const SearchConfig& config = {});

[[nodiscard]] int count_stable(const ModelSpec& model, const SearchConfig& config = {});
[[nodiscard]] int count_stable(const std::vector<SteadyState>& states);

struct ClosureViolation {
    std::size_t state_index = 0;
    std::string op;
    std::string reason;
};

struct ClosureReport {
    std::size_t checked = 0;
    std::vector<ClosureViolation> violations;
    [[nodiscard]] bool closed() const noexcept { return violations.empty(); }
};

/// Checks that every generator image of every state is in the list and has a
/// matching spectrum (to 1e-8 as a multiset).
[[nodiscard]] ClosureReport verify_symmetry_closure(const ModelSpec& model, const std::vector<SteadyState>& states,
                                                    double dedup_tol = 1e-6);

}  // namespace ringbif
