#include "ringbif/steady_states.hpp"

#include <algorithm>
#include <cmath>

#include "ringbif/numerics/newton.hpp"
#include "ringbif/parallel.hpp"

namespace ringbif {

namespace {

constexpr double kNewtonTol = 1e-12;
constexpr long kMaxGridStarts = 20'000;

struct Candidate {
    Vector root;
    double last_step = 0.0;
    bool ok = false;
};

SystemFunction make_system(const ModelSpec& model) {
    return [model](std::span<const double> z, Vector& f, Matrix& J) {
        rhs_into(model, z, f);
        jacobian_into(model, z, J);
    };
}

Candidate polish(const SystemFunction& system, Vector guess, int max_iter = 100) {
    NewtonOptions opts;
    opts.tol = kNewtonTol;
    opts.max_iter = max_iter;
    auto res = newton_refine(system, std::move(guess), opts);
    Candidate c;
    c.ok = res.converged;
    c.last_step = res.last_step;
    c.root = std::move(res.root);
    if (c.ok) {
        // round-off leftovers like 1e-17 become exact zeros when that does not
        // worsen the residual
        Vector snapped = c.root;
        bool changed = false;
        for (double& v : snapped) {
            if (v != 0.0 && std::abs(v) <= 1e-13) {
                v = 0.0;
                changed = true;
            }
        }
        if (changed) {
            Vector f(snapped.size());
            Matrix J(snapped.size(), snapped.size());
            system(snapped, f, J);
            if (max_abs(f) <= res.residual) c.root = std::move(snapped);
        }
    }
    return c;
}

}  // namespace

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "Stable";
        case Stability::Unstable: return "Unstable";
        case Stability::Marginal: return "Marginal";
    }
    return "?";
}

std::string to_string(Synchrony s) {
    return s == Synchrony::Synchronous ? "Synchronous" : "Nonsynchronous";
}

Stability classify_stability(const Spectrum& spectrum, double eps) {
    const double lead = spectrum.leading_real();
    if (lead < -eps) return Stability::Stable;
    if (lead > eps) return Stability::Unstable;
    return Stability::Marginal;
}

Synchrony classify_synchrony(const ModelSpec& model, std::span<const double> state, double tol) {
    const std::size_t n = static_cast<std::size_t>(model.n);
    const std::size_t blocks = model.kind == ModelKind::NormalFormRing ? 1 : 2;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double first = state[b * n];
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(state[b * n + i] - first) > tol) return Synchrony::Nonsynchronous;
        }
    }
    return Synchrony::Synchronous;
}

SteadyState describe_state(const ModelSpec& model, Vector state) {
    SteadyState s;
    s.residual = max_abs(rhs(model, state));
    s.spectrum = eigenvalues(jacobian(model, state));
    s.stability = classify_stability(s.spectrum);
    s.synchrony = classify_synchrony(model, state);
    s.state = std::move(state);
    return s;
}

double SearchConfig::resolved_box(const ModelSpec& model) const {
    if (box_half_width > 0.0) return box_half_width;
    return 2.0 * std::sqrt(std::abs(model.r) + std::abs(model.p) + 1.0);
}

int SearchConfig::resolved_grid(const ModelSpec& model) const {
    if (grid_points_per_axis >= 0) return grid_points_per_axis;
    const double dim = static_cast<double>(model.dimension());
    int g = static_cast<int>(std::floor(std::pow(static_cast<double>(kMaxGridStarts), 1.0 / dim) + 1e-9));
    return std::max(g, 1);
}

SearchBox search_box(const ModelSpec& model, const SearchConfig& config) {
    const std::size_t dim = model.dimension();
    SearchBox box{Vector(dim), Vector(dim)};
    if (model.kind == ModelKind::MutualRepressorRing && model.p < 1.0 && config.box_half_width <= 0.0) {
        std::fill(box.lo.begin(), box.lo.end(), -1.0);
        std::fill(box.hi.begin(), box.hi.end(), model.r / (1.0 - model.p) + 1.0);
        return box;
    }
    const double b = config.resolved_box(model);
    std::fill(box.lo.begin(), box.lo.end(), -b);
    std::fill(box.hi.begin(), box.hi.end(), b);
    if (model.kind == ModelKind::MutualRepressorRing) {
        for (double& h : box.hi) h += model.r;
    }
    return box;
}

// StateIndex ----------------------------------------------------------------

long long StateIndex::key(double v) const noexcept {
    return static_cast<long long>(std::floor(v / tol_));
}

std::optional<std::size_t> StateIndex::find(std::span<const double> state, double tol) const {
    if (states_.empty()) return std::nullopt;
    const long long lo = key(state[0] - tol);
    const long long hi = key(state[0] + tol);
    std::optional<std::size_t> best;
    double best_d = tol;
    for (auto it = buckets_.lower_bound(lo); it != buckets_.end() && it->first <= hi; ++it) {
        const Vector& s = states_[it->second];
        double d = 0.0;
        for (std::size_t i = 0; i < s.size() && d <= best_d; ++i) d = std::max(d, std::abs(s[i] - state[i]));
        if (d <= best_d) {
            best_d = d;
            best = it->second;
        }
    }
    return best;
}

std::size_t StateIndex::insert(Vector state) {
    const std::size_t idx = states_.size();
    buckets_.emplace(key(state[0]), idx);
    states_.push_back(std::move(state));
    return idx;
}

// find_all ------------------------------------------------------------------

std::vector<SteadyState> find_all(const ModelSpec& model, const SearchConfig& config) {
    validate(model);
    if (config.dedup_tol <= 0.0 || config.random_starts < 0) {
        throw ContractViolation("search config: dedup_tol must be positive and random_starts non-negative");
    }
    const std::size_t dim = model.dimension();
    const SearchBox box = search_box(model, config);
    const int grid = config.resolved_grid(model);
    const int threads = config.threads > 0 ? config.threads : default_thread_count();

    std::size_t grid_starts = 1;
    for (std::size_t d = 0; d < dim && grid > 0; ++d) grid_starts *= static_cast<std::size_t>(grid);
    if (grid == 0) grid_starts = 0;
    const std::size_t total = grid_starts + static_cast<std::size_t>(config.random_starts);

    const SystemFunction system = make_system(model);
    std::vector<Candidate> candidates(total);
    parallel_for(total, threads, [&](std::size_t idx) {
        Vector x0(dim);
        if (idx < grid_starts) {
            // cell centres of a uniform grid
            std::size_t rem = idx;
            for (std::size_t d = 0; d < dim; ++d) {
                const std::size_t c = rem % static_cast<std::size_t>(grid);
                rem /= static_cast<std::size_t>(grid);
                const double frac = (static_cast<double>(c) + 0.5) / grid;
                x0[d] = box.lo[d] + frac * (box.hi[d] - box.lo[d]);
            }
        } else {
            auto gen = indexed_generator(config.rng_seed, idx - grid_starts);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (std::size_t d = 0; d < dim; ++d) x0[d] = box.lo[d] + u(gen) * (box.hi[d] - box.lo[d]);
        }
        candidates[idx] = polish(system, std::move(x0));
    });

    // Dedup in index order. Near a degenerate root Newton only converges
    // linearly, so the merge radius grows with the last step length.
    StateIndex index(config.dedup_tol);
    for (const auto& c : candidates) {
        if (!c.ok) continue;
        const double radius = std::max(config.dedup_tol, 10.0 * c.last_step);
        if (index.find(c.root, radius)) continue;
        index.insert(c.root);
    }

    // Close under the symmetry group.
    const auto group = symmetry_group(model);
    const std::size_t base = index.size();
    for (std::size_t i = 0; i < base; ++i) {
        const Vector seed = index.states()[i];
        for (const auto& g : group) {
            Vector image = apply_group_element(g, model, seed);
            if (index.find(image)) continue;
            auto c = polish(system, std::move(image), 20);
            if (c.ok && !index.find(c.root)) index.insert(std::move(c.root));
        }
    }

    std::vector<SteadyState> states(index.size());
    parallel_for(index.size(), threads, [&](std::size_t i) { states[i] = describe_state(model, index.states()[i]); });
    states.erase(std::remove_if(states.begin(), states.end(),
                                [](const SteadyState& s) { return !(s.residual <= kSteadyResidualTol); }),
                 states.end());
    std::sort(states.begin(), states.end(),
              [](const SteadyState& a, const SteadyState& b) { return a.state < b.state; });

    // Orbit ids in sorted order.
    StateIndex sorted(config.dedup_tol);
    for (const auto& s : states) sorted.insert(s.state);
    int next_id = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].orbit_id >= 0) continue;
        const int id = next_id++;
        states[i].orbit_id = id;
        for (const auto& g : group) {
            if (auto j = sorted.find(apply_group_element(g, model, states[i].state)); j && states[*j].orbit_id < 0) {
                states[*j].orbit_id = id;
            }
        }
    }
    return states;
}

int count_stable(const std::vector<SteadyState>& states) {
    return static_cast<int>(
        std::count_if(states.begin(), states.end(), [](const SteadyState& s) { return s.stability == Stability::Stable; }));
}

int count_stable(const ModelSpec& model, const SearchConfig& config) {
    return count_stable(find_all(model, config));
}

ClosureReport verify_symmetry_closure(const ModelSpec& model, const std::vector<SteadyState>& states, double dedup_tol) {
    ClosureReport report;
    StateIndex index(dedup_tol);
    for (const auto& s : states) index.insert(s.state);

    const auto ops = applicable_generators(model.kind);
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (const auto& op : ops) {
            ++report.checked;
            const Vector image = apply_symmetry(op, model, states[i].state);
            const auto j = index.find(image);
            if (!j) {
                report.violations.push_back({i, op.name(), "image is not in the state list"});
                continue;
            }
            const double d = spectrum_distance(states[i].spectrum, states[*j].spectrum);
            if (!(d <= 1e-8)) {
                report.violations.push_back({i, op.name(), "spectra differ by " + std::to_string(d)});
            }
        }
    }
    return report;
}

}  // namespace ringbif
