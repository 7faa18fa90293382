// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "ringbif/analytic.hpp"
#include "ringbif/continuation.hpp"
#include "ringbif/numerics/ode.hpp"
#include "ringbif/patterns.hpp"
#include "ringbif/steady_states.hpp"
#include "ringbif/sweep.hpp"

using namespace ringbif;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kSyncResidualTol = 1e-12;
constexpr double kSpectrumTol = 1e-9;
constexpr double kBranchPointTol = 1e-6;
constexpr double kLimitPointBand = 0.02;
constexpr double kReducedTrajectoryTol = 1e-7;
constexpr double kThresholdTol = 1e-6;
constexpr double kPatternBand = 3.0;  // percentage points
constexpr double kRepressorPointTol = 0.01;
constexpr double kRepressorStabilizationTol = 0.5;
constexpr long kPatternSamples = 10'000;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back((ok ? "ok: " : "FAILED: ") + what);
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Every find_all call goes through here so the closure criterion can audit
// all of them.
struct ClosureAudit {
    std::size_t runs = 0;
    std::size_t states = 0;
    std::vector<std::string> failures;
};
ClosureAudit g_audit;

std::vector<SteadyState> search(const ModelSpec& m, int starts = 4000) {
    SearchConfig cfg;
    cfg.random_starts = starts;
    auto states = find_all(m, cfg);
    const auto report = verify_symmetry_closure(m, states);
    ++g_audit.runs;
    g_audit.states += states.size();
    if (!report.closed()) {
        std::ostringstream os;
        os << to_string(m.kind) << " n=" << m.n << " r=" << m.r << " p=" << m.p << ": "
           << report.violations.size() << " violations";
        g_audit.failures.push_back(os.str());
    }
    return states;
}

std::vector<SpecialPoint> branch_points(const Branch& b) {
    std::vector<SpecialPoint> out;
    for (const auto& sp : b.special_points)
        if (sp.kind == SpecialKind::BranchPoint && sp.diagnostic.empty()) out.push_back(sp);
    return out;
}

std::optional<SpecialPoint> nearest(const std::vector<SpecialPoint>& sps, double r) {
    std::optional<SpecialPoint> best;
    for (const auto& sp : sps)
        if (!best || std::abs(sp.r - r) < std::abs(best->r - r)) best = sp;
    return best;
}

// Stability just below and just above r along a branch.
std::pair<Stability, Stability> stability_across(const Branch& b, double r, double gap = 0.02) {
    const BranchPointEntry* below = nullptr;
    const BranchPointEntry* above = nullptr;
    for (const auto& e : b.points) {
        if (e.r < r - gap && (!below || e.r > below->r)) below = &e;
        if (e.r > r + gap && (!above || e.r < above->r)) above = &e;
    }
    return {below ? below->stability : Stability::Marginal, above ? above->stability : Stability::Marginal};
}

// First r (in point order) where stability switches from `from` to `to`,
// located by bisection on the stability of the exact state at r.
double first_switch(const Branch& b, Stability from, Stability to) {
    for (std::size_t k = 1; k < b.points.size(); ++k) {
        const auto& a = b.points[k - 1];
        const auto& c = b.points[k];
        if (a.stability == from && c.stability == to) return 0.5 * (a.r + c.r);
    }
    return std::nan("");
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double p = u(gen);
        const double r = -p + std::abs(u(gen)) + 1e-3;
        const int n = 3 + k % 6;
        const auto m = ModelSpec::normal_form(n, r, p);
        const auto states = synchronous_states(ModelKind::NormalFormRing, n, r, p);
        if (states.size() != 3) o.check(false, "expected three synchronous states");
        for (const auto& s : states) worst = std::max(worst, max_abs(rhs(m, s.expand(m))));
    }
    o.check(worst <= kSyncResidualTol, "max ||rhs||_inf = " + fmt("%.2e", worst) + " over 100 (r, p)");
    return o;
}

Outcome criterion2() {
    Outcome o;
    std::mt19937_64 gen(202);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    int cases = 0;
    for (int n = 3; n <= 12; ++n) {
        for (int k = 0; k < 50; ++k) {
            const double r = u(gen), p = u(gen);
            const auto m = ModelSpec::normal_form(n, r, p);
            for (const auto& s : synchronous_states(ModelKind::NormalFormRing, n, r, p)) {
                worst = std::max(worst, spectrum_distance(circulant_spectrum(s.x, n, r, p),
                                                          eigenvalues(jacobian(m, s.expand(m)))));
                ++cases;
            }
        }
    }
    o.check(worst <= kSpectrumTol, "max multiset distance " + fmt("%.2e", worst) + " over " +
                                       std::to_string(cases) + " synchronous states, n = 3..12");
    return o;
}

struct ZeroBranch {
    int n;
    double p;
    ModelSpec model;
    Branch branch;
};

std::vector<ZeroBranch>& zero_branches() {
    static std::vector<ZeroBranch> all = [] {
        std::vector<ZeroBranch> v;
        for (int n : {3, 4, 6, 8}) {
            for (double p : {0.25, 0.5, 1.0}) {
                const double lo = -p - 0.5, hi = p + 0.5;
                const auto m = ModelSpec::normal_form(n, lo, p);
                v.push_back({n, p, m, trace(m, Vector(static_cast<std::size_t>(n), 0.0), lo, hi)});
            }
        }
        return v;
    }();
    return all;
}

Outcome criterion3() {
    Outcome o;
    double worst = 0.0;
    bool transitions = true;
    for (const auto& z : zero_branches()) {
        const auto bp = nearest(branch_points(z.branch), -z.p);
        const double err = bp ? std::abs(bp->r + z.p) : 1e9;
        worst = std::max(worst, err);
        const auto across = stability_across(z.branch, -z.p);
        const bool ok = across.first == Stability::Stable && across.second == Stability::Unstable;
        transitions = transitions && ok;
        if (err > kBranchPointTol || !ok)
            o.check(false, "n=" + std::to_string(z.n) + " p=" + fmt("%g", z.p) + " error " + fmt("%.2e", err));
    }
    o.check(worst <= kBranchPointTol, "max |r_BP + p| = " + fmt("%.2e", worst) + " over 12 (n, p)");
    o.check(transitions, "zero branch Stable -> Unstable across every primary BP");
    return o;
}

Outcome criterion4() {
    Outcome o;
    double worst = 0.0;
    int emerging = 0, bad = 0;
    for (const auto& z : zero_branches()) {
        const double target = -z.p * std::cos(2 * std::numbers::pi / z.n);
        const auto bp = nearest(branch_points(z.branch), target);
        if (!bp) {
            o.check(false, "no BP near the secondary threshold for n=" + std::to_string(z.n));
            continue;
        }
        worst = std::max(worst, std::abs(bp->r - target));
        const auto kids = branch_switch(z.model, *bp, z.branch.points.front().r, z.branch.points.back().r);
        if (kids.empty()) o.check(false, "no emerging branch for n=" + std::to_string(z.n) + " p=" + fmt("%g", z.p));
        for (const auto& k : kids) {
            ++emerging;
            for (const auto& e : k.points) {
                const double d = std::abs(e.r - bp->r);
                if (d < 1e-3 || d > 0.05) continue;
                const auto m = z.model.with_r(e.r);
                if (e.stability != Stability::Unstable || classify_synchrony(m, e.state) != Synchrony::Nonsynchronous)
                    ++bad;
            }
        }
    }
    o.check(worst <= kBranchPointTol, "max |r_BP + p cos(2 pi / n)| = " + fmt("%.2e", worst));
    o.check(emerging > 0 && bad == 0, std::to_string(emerging) + " emerging branches, " + std::to_string(bad) +
                                          " points near the BP not Nonsynchronous+Unstable");
    return o;
}

Outcome criterion5() {
    Outcome o;
    // Dense-scan oracle: the number of steady states jumps where the fold
    // pairs appear; bracket it on a 1e-3 grid, then refine the reduced fold.
    const double p = 0.5;
    std::size_t prev = 0;
    double bracket_lo = std::nan(""), bracket_hi = std::nan("");
    for (int k = 0; k <= 100; ++k) {
        const double r = 1.30 + 1e-3 * k;
        SearchConfig cfg;
        cfg.random_starts = 1000;
        cfg.grid_points_per_axis = 12;
        const auto n_states = find_all(ModelSpec::normal_form(3, r, p), cfg).size();
        if (k > 0 && n_states > prev) {
            bracket_lo = r - 1e-3;
            bracket_hi = r;
            break;
        }
        prev = n_states;
    }
    o.check(std::isfinite(bracket_lo), "dense scan brackets the fold in [" + fmt("%.3f", bracket_lo) + ", " +
                                           fmt("%.3f", bracket_hi) + "]");
    double r_lp = 0.5 * (bracket_lo + bracket_hi);
    for (const auto& f : oracle::three_cell_folds(p, r_lp))
        if (f[2] >= bracket_lo && f[2] <= bracket_hi) r_lp = f[2];
    o.notes.push_back("pinned r_LP = " + fmt("%.10f", r_lp));

    const Diagram d = build_diagram(ModelKind::NormalFormRing, 3, p, -1.0, 2.0);
    std::vector<double> zero_bps;
    for (const auto& sp : d.special_points(SpecialKind::BranchPoint))
        if (max_abs(sp.state) <= 1e-9) zero_bps.push_back(sp.r);
    std::sort(zero_bps.begin(), zero_bps.end());
    o.check(zero_bps.size() == 2, std::to_string(zero_bps.size()) + " BPs on the zero branch");
    const auto lps = d.special_points(SpecialKind::LimitPoint);
    int within = 0, above = 0;
    for (const auto& lp : lps) {
        within += std::abs(lp.r - r_lp) <= kLimitPointBand;
        above += lp.state[0] > 0;
    }
    o.check(lps.size() == 6 && within == 6, std::to_string(lps.size()) + " LPs, " + std::to_string(within) +
                                                 " within 0.02 of r_LP");
    o.check(above == 3, std::to_string(above) + " LPs with x1 > 0");
    return o;
}

Outcome criterion6() {
    Outcome o;
    const int expected[3] = {1, 2, 8};
    const double rs[3] = {-1.0, 1.0, 2.0};
    for (int k = 0; k < 3; ++k) {
        const int c = count_stable(search(ModelSpec::normal_form(3, rs[k], 0.5)));
        o.check(c == expected[k], "n=3 p=0.5 r=" + fmt("%g", rs[k]) + ": " + std::to_string(c) + " stable");
    }
    const int c0 = count_stable(search(ModelSpec::normal_form(3, 1.0, 0.0)));
    o.check(c0 == 8, "n=3 p=0 r=1: " + std::to_string(c0) + " stable (2^3)");
    return o;
}

Outcome criterion7() {
    Outcome o;
    int nonsync = 0, states = 0;
    double worst = 0.0;
    for (int n : {3, 6}) {
        for (double p : {0.5, 1.0}) {
            const double secondary = -p * std::cos(2 * std::numbers::pi / n);
            for (int k = 0; k < 10; ++k) {
                const double r = secondary - 0.02 - 0.15 * k;
                const auto m = ModelSpec::normal_form(n, r, p);
                for (const auto& s : search(m, 2000)) {
                    ++states;
                    nonsync += s.synchrony == Synchrony::Nonsynchronous;
                }
                const RhsFunction reduced = [&](std::span<const double> z, std::span<double> out) {
                    out[0] = reduced_rhs(ModelKind::NormalFormRing, r, p, z)[0];
                };
                for (double c : {-2.0, -0.3, 0.05, 0.7, 1.9}) {
                    for (double t : {1.0, 5.0}) {
                        const auto full = integrate_until(m, Vector(static_cast<std::size_t>(n), c), t);
                        const auto red = integrate_until(reduced, Vector{c}, t);
                        if (!full.converged || !red.converged) {
                            worst = 1e9;
                            continue;
                        }
                        for (double v : full.terminal) worst = std::max(worst, std::abs(v - red.terminal[0]));
                    }
                }
            }
        }
    }
    o.check(nonsync == 0, std::to_string(states) + " states over 40 (n, p, r), " + std::to_string(nonsync) +
                              " nonsynchronous");
    o.check(worst <= kReducedTrajectoryTol, "max |full - reduced| = " + fmt("%.2e", worst));
    return o;
}

Outcome criterion8() {
    Outcome o;
    {
        const auto m = ModelSpec::normal_form(3, -1.0, -0.5);
        const auto b = trace(m, Vector(3, 0.0), -1.0, 2.0);
        const auto bp = nearest(branch_points(b), -0.25);
        const auto across = stability_across(b, -0.25);
        const bool ok = bp && std::abs(bp->r + 0.25) <= kThresholdTol && across.first == Stability::Stable &&
                        across.second == Stability::Unstable;
        o.check(ok, "n=3 p=-0.5 zero branch Stable -> Unstable at " + fmt("%.9f", bp ? bp->r : NAN));
    }
    auto sync_branch = [&](int n, double p, double target, const std::string& label) {
        const double r0 = -p + 0.05;
        const auto m = ModelSpec::normal_form(n, r0, p);
        const auto b = trace(m, Vector(static_cast<std::size_t>(n), std::sqrt(r0 + p)), r0, 2.5);
        const auto bp = nearest(branch_points(b), target);
        const auto across = stability_across(b, target);
        const bool ok = bp && std::abs(bp->r - target) <= kThresholdTol && across.first == Stability::Unstable &&
                        across.second == Stability::Stable;
        o.check(ok, label + " Unstable -> Stable at " + fmt("%.9f", bp ? bp->r : NAN));
    };
    sync_branch(3, -0.5, 0.875, "n=3 p=-0.5 +sqrt(r+p) branch");
    sync_branch(4, -0.5, 1.0, "n=4 p=-0.5 +sqrt(r+p) branch");
    return o;
}

Outcome criterion9() {
    Outcome o;
    std::mt19937_64 gen(909);
    std::uniform_real_distribution<double> pu(0.2, 1.5), ru(0.1, 3.0);
    for (int sign : {1, -1}) {
        int checked = 0, failed = 0;
        for (int k = 0; k < 20; ++k) {
            const double p = sign * pu(gen);
            const double r = (sign > 0 ? -0.5 * p : -p) + ru(gen);
            const int n = 3 + k % 3;
            for (const auto& s : search(ModelSpec::normal_form(n, r, p), 2000)) {
                if (s.synchrony != Synchrony::Nonsynchronous) continue;
                ++checked;
                failed += !nonsync_bound_check(s.state, r, p).satisfied;
            }
        }
        o.check(checked > 0 && failed == 0, std::string(sign > 0 ? "p > 0" : "p < 0") + ": " +
                                                std::to_string(checked) + " nonsynchronous states, " +
                                                std::to_string(failed) + " violate the bound");
    }
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto d3 = run_sweep(ModelKind::NormalFormRing, 3, make_axis(-1.0, 2.0, 0.05), {-0.5},
                              sweep_search_defaults(ModelKind::NormalFormRing, 3));
    std::set<int> seen;
    for (std::size_t i = 0; i < d3.r_axis.size(); ++i)
        if (!d3.boundary[i][0]) seen.insert(d3.counts[i][0]);
    std::string list;
    for (int c : seen) list += std::to_string(c) + " ";
    o.check(seen.count(1) && seen.count(6) && seen.count(8) && !seen.count(2),
            "n=3 p=-0.5 column counts { " + list + "}");

    const auto d4 = run_sweep(ModelKind::NormalFormRing, 4, make_axis(-1.0, 3.0, 0.1), {-1.0},
                              sweep_search_defaults(ModelKind::NormalFormRing, 4));
    int two_cells = 0, alternating = 0;
    for (std::size_t i = 0; i < d4.r_axis.size(); ++i) {
        if (d4.boundary[i][0] || d4.counts[i][0] != 2) continue;
        ++two_cells;
        const double r = d4.r_axis[i];
        bool all_alt = true;
        for (const auto& s : search(ModelSpec::normal_form(4, r, -1.0), 2000))
            if (s.stability == Stability::Stable) all_alt = all_alt && classify(s.state, r, -1.0).text() == "(-a,a,-a,a)";
        alternating += all_alt;
    }
    o.check(two_cells > 0 && alternating == two_cells,
            "n=4 p=-1: " + std::to_string(two_cells) + " count-2 cells, " + std::to_string(alternating) +
                " with only (-a,a,-a,a) stable states");
    return o;
}

Outcome criterion11() {
    Outcome o;
    const auto a = sample(ModelSpec::normal_form(4, 0.2, 1.0), kPatternSamples, 0.0, 1101);
    const auto* up = a.find("(A,A,A,A)");
    const auto* down = a.find("(-A,-A,-A,-A)");
    const bool two = a.entries.size() == 2 && up && down;
    o.check(two && std::abs(up->percentage - 50) <= kPatternBand && std::abs(down->percentage - 50) <= kPatternBand,
            "n=4 p=1 r=0.2: " + std::to_string(a.entries.size()) + " signatures, (A,A,A,A) " +
                fmt("%.2f%%", up ? up->percentage : NAN) + ", (-A,-A,-A,-A) " +
                fmt("%.2f%%", down ? down->percentage : NAN));

    const auto b = sample(ModelSpec::normal_form(4, 1.0, 1.0), kPatternSamples, 0.0, 1102);
    o.check(std::abs(b.homogeneous_percentage() - 80) <= kPatternBand,
            "n=4 p=1 r=1: homogeneous " + fmt("%.2f%%", b.homogeneous_percentage()));

    const auto c = sample(ModelSpec::normal_form(4, 0.2, -1.0), kPatternSamples, 0.0, 1103);
    const auto* alt = c.find("(-a,a,-a,a)");
    o.check(c.entries.size() == 1 && alt && alt->percentage == 100.0,
            "n=4 p=-1 r=0.2: alternating class " + fmt("%.2f%%", alt ? alt->percentage : 0.0));
    o.check(!a.flagged() && !b.flagged() && !c.flagged(), "unconverged samples within 0.1%");
    return o;
}

bool symmetric_sync(const BranchPointEntry& e, int n) {
    const auto N = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < 2 * N; ++i)
        if (std::abs(e.state[i] - e.state[0]) > 1e-8) return false;
    return true;
}

bool asymmetric_sync(const BranchPointEntry& e, int n) {
    const auto N = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < N; ++i)
        if (std::abs(e.state[i] - e.state[0]) > 1e-8 || std::abs(e.state[N + i] - e.state[N]) > 1e-8) return false;
    return std::abs(e.state[0] - e.state[N]) > 1e-4;
}

Outcome criterion12() {
    Outcome o;
    // scalar oracle: x = y = s, s^3 + s = r, pitchfork where 2 r s / (1 + s^2)^2 = 1
    const double s = oracle::bisect(
        [](double v) { return 2.0 * (v * v * v + v) * v / ((1 + v * v) * (1 + v * v)) - 1.0; }, 0.5, 3.0);
    const double r_star = s * s * s + s;
    {
        const double r0 = 0.5;
        const auto m = ModelSpec::repressor(3, r0, 0.0);
        const auto b = trace(m, Vector(6, oracle::repressor_symmetric_s(r0, 0.0)), 0.0, 4.0);
        const auto bp = nearest(branch_points(b), r_star);
        o.check(std::abs(r_star - 2.0) <= kBranchPointTol && bp && std::abs(bp->r - 2.0) <= kBranchPointTol,
                "uncoupled pitchfork: oracle " + fmt("%.9f", r_star) + ", continuation " +
                    fmt("%.9f", bp ? bp->r : NAN));
    }
    {
        const Diagram d = build_diagram(ModelKind::MutualRepressorRing, 3, 0.5, 0.0, 8.0);
        bool super = false;
        for (const auto& b : d.branches) {
            if (b.points.empty() || !asymmetric_sync(b.points.back(), 3)) continue;
            bool stable_near = false;
            for (const auto& e : b.points)
                if (e.r > 1.02 && e.r < 1.2) stable_near = stable_near || e.stability == Stability::Stable;
            super = super || stable_near;
        }
        const auto bp = nearest(d.special_points(SpecialKind::BranchPoint), 1.0);
        o.check(super && bp && std::abs(bp->r - 1.0) <= kRepressorPointTol,
                "p=0.5: pitchfork at " + fmt("%.6f", bp ? bp->r : NAN) + " with stable emerging branches");
        int nonsync = 0;
        for (int k = 0; k <= 16; ++k) {
            const auto m = ModelSpec::repressor(3, 0.5 * k, 0.5);
            for (const auto& st : search(m, 2000)) nonsync += st.synchrony == Synchrony::Nonsynchronous;
        }
        o.check(nonsync == 0, "p=0.5: " + std::to_string(nonsync) + " nonsynchronous states over r = 0, 0.5, ..., 8");
    }
    {
        const Diagram d = build_diagram(ModelKind::MutualRepressorRing, 3, -0.5, 0.0, 8.0);
        double loss = std::nan("");
        for (const auto& b : d.branches) {
            if (b.points.empty() || !symmetric_sync(b.points.front(), 3)) continue;
            bool all_symmetric = true;
            for (const auto& e : b.points) all_symmetric = all_symmetric && symmetric_sync(e, 3);
            if (!all_symmetric) continue;
            const double r = first_switch(b, Stability::Stable, Stability::Unstable);
            if (std::isfinite(r)) loss = r;
        }
        // refine the stability change of the symmetric state
        if (std::isfinite(loss)) {
            loss = oracle::bisect(
                [](double r) {
                    const double sv = oracle::repressor_symmetric_s(r, -0.5);
                    return eigenvalues(jacobian(ModelSpec::repressor(3, r, -0.5), Vector(6, sv))).leading_real();
                },
                loss - 0.1, loss + 0.1, 1e-12);
        }
        o.check(std::isfinite(loss) && std::abs(loss - 1.0) <= kRepressorPointTol,
                "p=-0.5: symmetric branch Stable -> Unstable at " + fmt("%.6f", loss) + " (target 1 +- 0.01)");

        bool bp3 = false;
        for (const auto& sp : d.special_points(SpecialKind::BranchPoint))
            bp3 = bp3 || std::abs(sp.r - 3.0) <= kRepressorPointTol;
        o.check(bp3, "p=-0.5: branch point at r = 3 +- 0.01");

        std::vector<double> stabilize;
        for (const auto& b : d.branches) {
            bool sync_asym = !b.points.empty();
            for (const auto& e : b.points) sync_asym = sync_asym && (asymmetric_sync(e, 3) || e.r < 3.05);
            if (!sync_asym) continue;
            const double r = first_switch(b, Stability::Unstable, Stability::Stable);
            if (std::isfinite(r)) stabilize.push_back(r);
        }
        bool near6 = !stabilize.empty();
        std::string list;
        for (double r : stabilize) {
            near6 = near6 && std::abs(r - 6.0) <= kRepressorStabilizationTol;
            list += fmt("%.4f ", r);
        }
        o.check(near6, "p=-0.5: emerging synchronous branches stabilize at { " + list + "}");
    }
    return o;
}

Outcome criterion13() {
    Outcome o;
    // also cover the states of the other checked configurations
    for (const auto& m : {ModelSpec::normal_form(3, 2.0, 0.5), ModelSpec::normal_form(4, 4.0, 1.0),
                          ModelSpec::normal_form(3, 1.0, -0.5), ModelSpec::normal_form(4, 0.2, -1.0),
                          ModelSpec::repressor(3, 8.0, -0.5)})
        (void)search(m, 2000);
    o.check(g_audit.failures.empty(), std::to_string(g_audit.runs) + " searches, " + std::to_string(g_audit.states) +
                                          " states, " + std::to_string(g_audit.failures.size()) + " not closed");
    for (const auto& f : g_audit.failures) o.notes.push_back(f);
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

// Data outputs byte for byte; manifests without their timing and thread fields.
bool same_outputs(const fs::path& a, const fs::path& b, std::string& why) {
    std::set<std::string> names;
    for (const auto& e : fs::directory_iterator(a)) names.insert(e.path().filename().string());
    for (const auto& name : names) {
        if (!fs::exists(b / name)) {
            why = name + " missing";
            return false;
        }
        if (name.ends_with(".manifest.json")) {
            auto ja = nlohmann::json::parse(slurp(a / name)), jb = nlohmann::json::parse(slurp(b / name));
            for (auto* j : {&ja, &jb}) {
                j->erase("duration_seconds");
                (*j)["parameters"].erase("threads");
                (*j)["parameters"].erase("output_dir");
            }
            if (ja != jb) {
                why = name + " differs";
                return false;
            }
        } else if (slurp(a / name) != slurp(b / name)) {
            why = name + " differs";
            return false;
        }
    }
    return !names.empty();
}

Outcome criterion14() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "ringbif_acceptance_determinism";
    fs::remove_all(root);
    const std::vector<std::vector<std::string>> commands{
        {"steady-states", "--model", "normal", "--n", "4", "--r", "2", "--p", "-0.7", "--seed", "14"},
        {"steady-states", "--model", "repressor", "--n", "3", "--r", "7", "--p", "-0.5", "--seed", "14", "--format", "csv"},
        {"patterns", "--n", "4", "--r", "1", "--p", "1", "--samples", "3000", "--seed", "14"},
        {"patterns", "--n", "5", "--r", "2", "--p", "-0.6", "--samples", "2000", "--seed", "14", "--format", "json"}};
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::vector<fs::path> dirs;
        for (const char* run : {"run1_t1", "run2_t1", "run3_t4"}) {
            const fs::path dir = root / (std::to_string(c) + run);
            auto args = commands[c];
            args.insert(args.end(), {"--output-dir", dir.string(), "--threads", std::string(run).ends_with("t4") ? "4" : "1"});
            std::ostringstream out, err;
            if (cli::run(args, out, err) != 0) o.check(false, "command failed: " + err.str());
            dirs.push_back(dir);
        }
        std::string why;
        const bool same = same_outputs(dirs[0], dirs[1], why) && same_outputs(dirs[0], dirs[2], why);
        o.check(same, commands[c][0] + " #" + std::to_string(c) + (same ? " identical over 2 runs and threads {1, 4}" : ": " + why));
    }
    fs::remove_all(root);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"synchronous states satisfy rhs = 0", criterion1},
        {"circulant spectrum matches dense eigenvalues", criterion2},
        {"primary pitchfork at r = -p", criterion3},
        {"secondary branch point at r = -p cos(2 pi/n)", criterion4},
        {"three-cell diagram: 2 BPs, 6 LPs", criterion5},
        {"stable counts with positive and zero coupling", criterion6},
        {"synchronous-only zone and reduced dynamics", criterion7},
        {"negative-coupling stability thresholds", criterion8},
        {"nonsynchronous amplitude bounds", criterion9},
        {"negative-coupling zone structure", criterion10},
        {"pattern distributions", criterion11},
        {"mutual-repressor ring", criterion12},
        {"symmetry closure of search output", criterion13},
        {"CLI determinism", criterion14},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[k].second();
        } catch (const std::exception& e) {
            out.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !out.pass;
        std::printf("%s criterion %2zu: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), secs);
        for (const auto& note : out.notes) std::printf("      %s\n", note.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
