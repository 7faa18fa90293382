#include "ringbif/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringbif/parallel.hpp"

namespace ringbif {

namespace {

constexpr double kBoundaryTol = 1e-3;

void require_increasing(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw ContractViolation(std::string(name) + " axis is empty");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i])) throw ContractViolation(std::string(name) + " axis has a non-finite value");
        if (i > 0 && !(axis[i] > axis[i - 1])) {
            throw ContractViolation(std::string(name) + " axis must be strictly increasing");
        }
    }
}

bool near_threshold(const BifurcationPrediction& pred, double r) {
    for (double t : {pred.primary_branch_point_r, pred.secondary_branch_point_r, pred.zero_state_destabilization_r,
                     pred.nonzero_branch_stabilization_r}) {
        if (std::abs(r - t) <= kBoundaryTol) return true;
    }
    return false;
}

double cell_width(const std::vector<double>& axis, std::size_t i) {
    double w = 0.0;
    if (i > 0) w = std::max(w, axis[i] - axis[i - 1]);
    if (i + 1 < axis.size()) w = std::max(w, axis[i + 1] - axis[i]);
    return w;
}

}  // namespace

std::vector<double> make_axis(double lo, double hi, double step) {
    std::vector<double> axis;
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) return axis;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-3));
    axis.reserve(static_cast<std::size_t>(count) + 1);
    // lo + k * step rather than repeated addition so nodes stay exact where possible
    for (long k = 0; k <= count; ++k) axis.push_back(lo + static_cast<double>(k) * step);
    return axis;
}

SearchConfig sweep_search_defaults(ModelKind kind, int n) {
    SearchConfig c;
    const int dim = kind == ModelKind::NormalFormRing ? n : 2 * n;
    c.grid_points_per_axis =
        std::max(2, static_cast<int>(std::floor(std::pow(4000.0, 1.0 / static_cast<double>(dim)) + 1e-9)));
    c.random_starts = 1000;
    return c;
}

std::vector<ZoneBoundary> PhaseDiagram::zone_boundaries() const {
    std::map<std::pair<int, int>, ZoneBoundary> by_pair;
    for (std::size_t j = 0; j < p_axis.size(); ++j) {
        for (std::size_t i = 0; i + 1 < r_axis.size(); ++i) {
            const int a = counts[i][j];
            const int b = counts[i + 1][j];
            if (a == b) continue;
            auto& zb = by_pair[{a, b}];
            zb.from_count = a;
            zb.to_count = b;
            zb.points.emplace_back(0.5 * (r_axis[i] + r_axis[i + 1]), p_axis[j]);
        }
    }
    std::vector<ZoneBoundary> out;
    for (auto& [key, zb] : by_pair) out.push_back(std::move(zb));
    return out;
}

PhaseDiagram run_sweep(ModelKind kind, int n, const std::vector<double>& r_axis, const std::vector<double>& p_axis,
                       const SearchConfig& config) {
    require_increasing(r_axis, "r");
    require_increasing(p_axis, "p");
    // validates n, repressor r >= 0 and finiteness for the extreme corners
    for (double r : {r_axis.front(), r_axis.back()})
        for (double p : {p_axis.front(), p_axis.back()}) (void)ModelSpec::make(kind, n, r, p);
    if (kind == ModelKind::MutualRepressorRing && !(p_axis.back() < 1.0)) {
        throw ContractViolation("repressor sweeps need p < 1");
    }

    PhaseDiagram d;
    d.kind = kind;
    d.n = n;
    d.r_axis = r_axis;
    d.p_axis = p_axis;
    d.rng_seed = config.rng_seed;
    d.counts.assign(r_axis.size(), std::vector<int>(p_axis.size(), 0));
    std::vector<std::vector<char>> flags(r_axis.size(), std::vector<char>(p_axis.size(), 0));

    const std::size_t cells = r_axis.size() * p_axis.size();
    const int threads = config.threads > 0 ? config.threads : default_thread_count();
    parallel_for(cells, threads, [&](std::size_t cell) {
        const std::size_t i = cell / p_axis.size();
        const std::size_t j = cell % p_axis.size();
        SearchConfig local = config;
        local.threads = 1;
        local.rng_seed = indexed_generator(config.rng_seed, cell)();
        const ModelSpec model = ModelSpec::make(kind, n, r_axis[i], p_axis[j]);
        const auto states = find_all(model, local);
        d.counts[i][j] = count_stable(states);
        bool flag = std::any_of(states.begin(), states.end(),
                                [](const SteadyState& s) { return s.stability == Stability::Marginal; });
        if (kind == ModelKind::NormalFormRing) flag = flag || near_threshold(predict_bifurcations(n, p_axis[j]), r_axis[i]);
        flags[i][j] = flag ? 1 : 0;
    });

    d.boundary.assign(r_axis.size(), std::vector<bool>(p_axis.size(), false));
    for (std::size_t i = 0; i < r_axis.size(); ++i)
        for (std::size_t j = 0; j < p_axis.size(); ++j) d.boundary[i][j] = flags[i][j] != 0;
    return d;
}

bool ZoneReport::all_ok() const {
    return std::all_of(columns.begin(), columns.end(), [](const ColumnComparison& c) { return c.ok(); });
}

ZoneReport compare_zones(const PhaseDiagram& diagram, const std::vector<BifurcationPrediction>& predictions) {
    if (predictions.size() != diagram.p_axis.size()) {
        throw ContractViolation("compare_zones: one prediction per p column is required");
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto& r = diagram.r_axis;
    ZoneReport report;
    for (std::size_t j = 0; j < diagram.p_axis.size(); ++j) {
        ColumnComparison col;
        col.p = diagram.p_axis[j];
        col.predicted_r = predictions[j].zero_state_destabilization_r;
        col.observed_r = nan;

        std::size_t leave = r.size();
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            if (diagram.counts[i][j] == 1 && diagram.counts[i + 1][j] != 1) {
                leave = i;
                break;
            }
        }
        if (leave < r.size()) {
            col.observed_r = 0.5 * (r[leave] + r[leave + 1]);
            col.deviation = std::abs(col.observed_r - col.predicted_r);
            col.within_one_cell = col.deviation <= cell_width(r, leave) * (1.0 + 1e-9);
        } else {
            col.deviation = nan;
            // no transition inside the grid: consistent only if the threshold lies outside it
            col.within_one_cell = col.predicted_r < r.front() || col.predicted_r > r.back();
        }

        // cells sitting on a threshold hold Marginal states; skip past them
        std::size_t first = leave + 1;
        while (first < r.size() && diagram.boundary[first][j]) ++first;
        if (col.p > 0.0 && leave < r.size() && first < r.size() && diagram.counts[first][j] == 2) {
            col.checks_two_zone = true;
            col.secondary_r = predictions[j].secondary_branch_point_r;
            std::size_t end = first;
            while (end + 1 < r.size() && diagram.counts[end + 1][j] == 2) ++end;
            col.two_zone_end_r = end + 1 < r.size() ? 0.5 * (r[end] + r[end + 1]) : r.back();
            col.two_zone_ok = end + 1 >= r.size() || col.two_zone_end_r >= col.secondary_r - cell_width(r, end);
        }
        report.columns.push_back(col);
    }
    return report;
}

ZoneReport compare_zones(const PhaseDiagram& diagram) {
    if (diagram.kind != ModelKind::NormalFormRing) {
        throw ContractViolation("threshold predictions exist for the normal-form ring only");
    }
    std::vector<BifurcationPrediction> preds;
    for (double p : diagram.p_axis) preds.push_back(predict_bifurcations(diagram.n, p));
    return compare_zones(diagram, preds);
}

}  // namespace ringbif
