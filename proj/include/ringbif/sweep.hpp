#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ringbif/analytic.hpp"
#include "ringbif/model.hpp"
#include "ringbif/steady_states.hpp"

namespace ringbif {

/// Inclusive grid lo, lo+step, ..., hi (hi is hit when it lies within
/// step/1000 of a grid node). Empty when step <= 0 or hi < lo.
[[nodiscard]] std::vector<double> make_axis(double lo, double hi, double step);

/// Lighter multistart settings used for every cell of a sweep.
[[nodiscard]] SearchConfig sweep_search_defaults(ModelKind kind, int n);

struct ZoneBoundary {
    int from_count = 0;  // count at the smaller r
    int to_count = 0;
    std::vector<std::pair<double, double>> points;  // (r midpoint, p)
};

struct PhaseDiagram {
    ModelKind kind = ModelKind::NormalFormRing;
    int n = 3;
    std::vector<double> r_axis;
    std::vector<double> p_axis;
    std::vector<std::vector<int>> counts;     // counts[i][j] at (r_axis[i], p_axis[j])
    std::vector<std::vector<bool>> boundary;  // near a predicted threshold or Marginal state found
    std::uint64_t rng_seed = 0;

    [[nodiscard]] int count_at(std::size_t i, std::size_t j) const { return counts.at(i).at(j); }

    /// Nearest-cell polylines between adjacent cells (along r) of different
    /// count, keyed by (from, to).
    [[nodiscard]] std::vector<ZoneBoundary> zone_boundaries() const;
};

/// counts[i][j] = count_stable at (r_i, p_j). Each cell gets a seed derived
/// from (config.rng_seed, cell index) and is searched single-threaded; cells
/// run on config.threads workers.
[[nodiscard]] PhaseDiagram run_sweep(ModelKind kind, int n, const std::vector<double>& r_axis,
                                     const std::vector<double>& p_axis, const SearchConfig& config);

struct ColumnComparison {
    double p = 0.0;
    double predicted_r = 0.0;  // zero state loses stability
    double observed_r = 0.0;   // first midpoint where the count leaves 1 (NaN if never)
    double deviation = 0.0;
    bool within_one_cell = false;

    // p > 0 only: the two-state zone must reach the secondary threshold.
    bool checks_two_zone = false;
    double secondary_r = 0.0;
    double two_zone_end_r = 0.0;
    bool two_zone_ok = true;

    [[nodiscard]] bool ok() const { return within_one_cell && two_zone_ok; }
};

struct ZoneReport {
    std::vector<ColumnComparison> columns;
    [[nodiscard]] bool all_ok() const;
};

/// Compares count transitions along each p column with per-column
/// predictions (predictions[j] belongs to p_axis[j]).
[[nodiscard]] ZoneReport compare_zones(const PhaseDiagram& diagram,
                                       const std::vector<BifurcationPrediction>& predictions);

/// Normal-form convenience: predictions from predict_bifurcations(n, p_j).
[[nodiscard]] ZoneReport compare_zones(const PhaseDiagram& diagram);

}  // namespace ringbif
