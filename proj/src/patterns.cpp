#include "ringbif/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "ringbif/parallel.hpp"
#include "ringbif/steady_states.hpp"

namespace ringbif {

namespace {

std::string letter(std::size_t k) {
    if (k < 26) return std::string(1, static_cast<char>('a' + k));
    return "z" + std::to_string(k - 25);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

bool PatternSignature::homogeneous() const {
    return !symbols.empty() && std::all_of(symbols.begin(), symbols.end(),
                                           [&](const std::string& s) { return s == symbols.front(); });
}

std::string PatternSignature::text() const {
    std::string out = "(";
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i) out += ',';
        out += symbols[i];
    }
    return out + ")";
}

PatternSignature classify(std::span<const double> state, double r, double p, double tol) {
    const std::size_t n = state.size();
    if (n == 0) throw ContractViolation("classify: empty state");
    const bool has_sync = r + p > 0.0;
    const double a = has_sync ? std::sqrt(r + p) : 0.0;

    enum class Tag { PlusA, MinusA, Zero, Other };
    std::vector<Tag> tags(n, Tag::Other);
    std::vector<double> mags;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = state[i];
        if (has_sync && std::abs(v - a) <= tol) {
            tags[i] = Tag::PlusA;
        } else if (has_sync && std::abs(v + a) <= tol) {
            tags[i] = Tag::MinusA;
        } else if (std::abs(v) <= tol) {
            tags[i] = Tag::Zero;
        } else {
            mags.push_back(std::abs(v));
        }
    }

    // clusters of magnitudes, largest first; a gap above kClusterGap starts a new letter
    std::sort(mags.begin(), mags.end(), std::greater<>());
    std::vector<double> cluster_floor;  // smallest magnitude in each cluster
    for (double m : mags) {
        if (cluster_floor.empty() || cluster_floor.back() - m > kClusterGap) {
            cluster_floor.push_back(m);
        } else {
            cluster_floor.back() = m;
        }
    }

    std::vector<std::string> symbols(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (tags[i]) {
            case Tag::PlusA: symbols[i] = "A"; break;
            case Tag::MinusA: symbols[i] = "-A"; break;
            case Tag::Zero: symbols[i] = "0"; break;
            case Tag::Other: {
                const double m = std::abs(state[i]);
                std::size_t k = 0;
                while (k + 1 < cluster_floor.size() && m < cluster_floor[k]) ++k;
                symbols[i] = (state[i] < 0.0 ? "-" : "") + letter(k);
                break;
            }
        }
    }

    std::size_t best = 0;
    auto rotated_less = [&](std::size_t s, std::size_t t) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& x = symbols[(s + i) % n];
            const auto& y = symbols[(t + i) % n];
            if (x != y) return x < y;
        }
        return false;
    };
    for (std::size_t s = 1; s < n; ++s)
        if (rotated_less(s, best)) best = s;

    PatternSignature sig;
    sig.symbols.reserve(n);
    sig.representative.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        sig.symbols.push_back(symbols[(best + i) % n]);
        sig.representative.push_back(state[(best + i) % n]);
    }
    return sig;
}

bool PatternDistribution::flagged() const {
    return total_samples > 0 && static_cast<double>(unconverged_count) > 1e-3 * static_cast<double>(total_samples);
}

double PatternDistribution::homogeneous_percentage() const {
    double total = 0.0;
    for (const auto& e : entries)
        if (e.signature.homogeneous()) total += e.percentage;
    return total;
}

const PatternEntry* PatternDistribution::find(const std::string& text) const {
    for (const auto& e : entries)
        if (e.signature.text() == text) return &e;
    return nullptr;
}

PatternDistribution sample(const ModelSpec& model, long num_samples, double ic_box_half_width, std::uint64_t seed,
                           const SampleOptions& options) {
    validate(model);
    if (model.kind != ModelKind::NormalFormRing) {
        throw ContractViolation("pattern signatures are defined for the normal-form ring");
    }
    if (num_samples < 1) throw ContractViolation("sample: num_samples must be at least 1");

    const double h = ic_box_half_width > 0.0 ? ic_box_half_width
                                             : 2.0 * std::sqrt(std::abs(model.r) + std::abs(model.p) + 1.0);
    const std::size_t n = model.dimension();

    struct Outcome {
        bool ok = false;
        bool marginal = false;
        PatternSignature signature;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(num_samples));
    const int threads = options.threads > 0 ? options.threads : default_thread_count();
    parallel_for(outcomes.size(), threads, [&](std::size_t k) {
        auto gen = indexed_generator(seed, k);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Vector x0(n);
        for (auto& v : x0) {
            v = -h + u(gen) * (2.0 * h);
            if (options.mirror) v = -v;
        }
        const auto res = integrate_to_steady(model, std::move(x0), options.integration);
        Outcome& out = outcomes[k];
        out.ok = res.converged && res.residual <= kSteadyResidualTol;
        if (!out.ok) return;
        out.signature = classify(res.terminal, model.r, model.p);
        out.marginal = classify_stability(eigenvalues(jacobian(model, res.terminal))) == Stability::Marginal;
    });

    PatternDistribution dist;
    dist.model = model;
    dist.total_samples = num_samples;
    dist.rng_seed = seed;
    dist.ic_box = h;
    dist.mirrored = options.mirror;

    std::map<std::vector<std::string>, PatternEntry> tally;
    long converged = 0;
    for (auto& o : outcomes) {
        if (!o.ok) {
            ++dist.unconverged_count;
            continue;
        }
        ++converged;
        auto [it, fresh] = tally.try_emplace(o.signature.symbols);
        if (fresh) it->second.signature = std::move(o.signature);
        ++it->second.count;
        if (o.marginal) ++it->second.marginal;
    }
    for (auto& [key, e] : tally) {
        e.percentage = converged > 0 ? 100.0 * static_cast<double>(e.count) / static_cast<double>(converged) : 0.0;
        dist.entries.push_back(std::move(e));
    }
    std::stable_sort(dist.entries.begin(), dist.entries.end(),
                     [](const PatternEntry& a, const PatternEntry& b) { return a.count > b.count; });
    return dist;
}

bool DominanceReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const DominanceCheck& c) { return c.passed; });
}

DominanceReport dominance_report(const std::vector<PatternDistribution>& distributions) {
    DominanceReport rep;
    for (const auto& d : distributions) {
        const double h = d.homogeneous_percentage();
        rep.rows.push_back({d.model.r, d.model.p, h, d.entries.empty() ? 0.0 : 100.0 - h});
    }
    std::sort(rep.rows.begin(), rep.rows.end(), [](const DominanceRow& a, const DominanceRow& b) {
        return a.p != b.p ? a.p < b.p : a.r < b.r;
    });

    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        const std::string at = "r=" + fmt(row.r) + ", p=" + fmt(row.p);
        if (row.p > 0.0) {
            if (i > 0 && rep.rows[i - 1].p == row.p) {
                const auto& prev = rep.rows[i - 1];
                rep.checks.push_back({"homogeneous share does not grow from r=" + fmt(prev.r) + " to " + at,
                                      row.homogeneous <= prev.homogeneous});
            }
            if (row.r <= 0.2) rep.checks.push_back({"no heterogeneous mass at " + at, row.heterogeneous == 0.0});
            if (row.r <= 2.5) rep.checks.push_back({"homogeneous majority at " + at, row.homogeneous > 50.0});
            if (row.r >= 4.0) rep.checks.push_back({"homogeneous minority at " + at, row.homogeneous < 50.0});
        } else if (row.p < 0.0 && row.r >= 2.5) {
            rep.checks.push_back({"homogeneous present but a minority at " + at,
                                  row.homogeneous > 0.0 && row.homogeneous < 50.0});
        }
    }
    return rep;
}

}  // namespace ringbif
