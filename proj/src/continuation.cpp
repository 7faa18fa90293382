#include "ringbif/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>

#include "ringbif/analytic.hpp"
#include "ringbif/numerics/newton.hpp"

namespace ringbif {

namespace {

// z = (x_1 .. x_dim, r)
struct Point {
    Vector z;
    Spectrum spectrum;
    Vector tangent;
};

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vector difference(std::span<const double> a, std::span<const double> b) {
    Vector d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

Vector axpy(std::span<const double> base, double s, std::span<const double> dir) {
    Vector out(base.begin(), base.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * dir[i];
    return out;
}

void normalize(Vector& v) {
    const double nv = norm2(v);
    if (nv > 0.0)
        for (double& x : v) x /= nv;
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

constexpr double kVertexRankTol = 1e-3;
constexpr double kVertexMatchTol = 1e-3;
constexpr std::string_view kVertexNote = "branch turns back at a branch point";

class Tracer {
public:
    Tracer(const ModelSpec& model, const ContinuationControls& controls)
        : model_(model), c_(controls), dim_(model.dimension()) {}

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] const ContinuationControls& controls() const { return c_; }

    [[nodiscard]] ModelSpec at(double r) const { return model_.with_r(r); }

    [[nodiscard]] std::span<const double> x_of(const Vector& z) const { return {z.data(), dim_}; }

    [[nodiscard]] Vector join(std::span<const double> x, double r) const {
        Vector z(x.begin(), x.end());
        z.push_back(r);
        return z;
    }

    // [J f_r; row]
    [[nodiscard]] Matrix bordered(const Vector& z, std::span<const double> row) const {
        const ModelSpec m = at(z[dim_]);
        const Matrix J = jacobian(m, x_of(z));
        const Vector fr = rhs_dr(m, x_of(z));
        Matrix A(dim_ + 1, dim_ + 1);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) A(i, j) = J(i, j);
            A(i, dim_) = fr[i];
        }
        for (std::size_t j = 0; j <= dim_; ++j) A(dim_, j) = row[j];
        return A;
    }

    // Newton on {f(x, r) = 0, dir . (z - anchor) = 0}. Returns the iteration
    // count, or -1 on failure.
    int correct(Vector& z, std::span<const double> dir, std::span<const double> anchor, int max_iter = -1) const {
        if (max_iter < 0) max_iter = c_.corrector_max_iter;
        Vector g(dim_ + 1);
        for (int it = 0; it <= max_iter; ++it) {
            const ModelSpec m = at(z[dim_]);
            rhs_into(m, x_of(z), std::span<double>(g.data(), dim_));
            g[dim_] = dot(dir, difference(z, anchor));
            const double res = max_abs(g);
            if (!std::isfinite(res)) return -1;
            if (res <= c_.corrector_tol) return it;
            if (it == max_iter) break;
            Vector delta;
            try {
                delta = solve_linear(bordered(z, dir), g);
            } catch (const SingularMatrix&) {
                return -1;
            }
            for (std::size_t i = 0; i <= dim_; ++i) z[i] -= delta[i];
            if (!(max_abs(delta) < 1e3)) return -1;
        }
        return -1;
    }

    // Unit tangent with orient . t > 0.
    [[nodiscard]] Vector tangent(const Vector& z, std::span<const double> orient) const {
        Vector e(dim_ + 1, 0.0);
        e[dim_] = 1.0;
        Vector t;
        try {
            t = solve_linear(bordered(z, orient), e);
        } catch (const SingularMatrix&) {
            // exactly on a singular point the tangent is not unique; keep the incoming direction
            t.assign(orient.begin(), orient.end());
        }
        normalize(t);
        if (dot(t, orient) < 0.0)
            for (double& v : t) v = -v;
        return t;
    }

    // Smallest right singular vector of [J f_r].
    [[nodiscard]] Vector null_tangent(const Vector& z) const {
        const ModelSpec m = at(z[dim_]);
        const Matrix J = jacobian(m, x_of(z));
        const Vector fr = rhs_dr(m, x_of(z));
        Matrix A(dim_, dim_ + 1);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) A(i, j) = J(i, j);
            A(i, dim_) = fr[i];
        }
        return kernel_basis(A, 0.0).front();
    }

    // Smallest of the n singular values of [J f_r], relative to its size;
    // zero at branch points, positive at limit points.
    [[nodiscard]] double augmented_rank_gap(const Vector& z) const {
        const ModelSpec m = at(z[dim_]);
        const Matrix J = jacobian(m, x_of(z));
        const Vector fr = rhs_dr(m, x_of(z));
        Matrix G(dim_, dim_);  // [J f_r] [J f_r]^T
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double s = fr[i] * fr[j];
                for (std::size_t k = 0; k < dim_; ++k) s += J(i, k) * J(j, k);
                G(i, j) = G(j, i) = s;
            }
        const double smallest = std::sqrt(std::max(symmetric_eigen(G).values.front(), 0.0));
        return smallest / (1.0 + J.norm_inf() + max_abs(fr));
    }

    [[nodiscard]] Spectrum spectrum(const Vector& z) const {
        return eigenvalues(jacobian(at(z[dim_]), x_of(z)));
    }

    [[nodiscard]] Point make_point(Vector z, std::span<const double> orient) const {
        Point p;
        p.spectrum = spectrum(z);
        p.tangent = tangent(z, orient);
        p.z = std::move(z);
        return p;
    }

    [[nodiscard]] bool eigen_jump_ok(const Spectrum& a, const Spectrum& b) const {
        std::vector<double> ra, rb;
        for (const auto& v : a.values) ra.push_back(v.real());
        for (const auto& v : b.values) rb.push_back(v.real());
        std::sort(ra.begin(), ra.end());
        std::sort(rb.begin(), rb.end());
        for (std::size_t i = 0; i < ra.size(); ++i) {
            if (std::abs(ra[i] - rb[i]) > c_.max_eig_change * (1.0 + std::abs(ra[i]))) return false;
        }
        return true;
    }

    // Solve f(x, r_fixed) = 0 from a guess.
    [[nodiscard]] std::optional<Vector> solve_at(std::span<const double> x0, double r_fixed) const {
        const ModelSpec m = at(r_fixed);
        auto system = [&m](std::span<const double> x, Vector& f, Matrix& J) {
            rhs_into(m, x, f);
            jacobian_into(m, x, J);
        };
        NewtonOptions opts;
        opts.tol = c_.corrector_tol;
        opts.max_iter = 30;
        auto res = newton_refine(system, Vector(x0.begin(), x0.end()), opts);
        if (!res.converged) return std::nullopt;
        return join(res.root, r_fixed);
    }

    // Points after `start` (exclusive), following `dir`.
    std::vector<Point> march(const Point& start, Vector dir, double r_lo, double r_hi, Branch& stats) const {
        std::vector<Point> out;
        Vector z = start.z;
        Spectrum spec = start.spectrum;
        double ds = c_.ds_init;

        for (int step = 0; step < c_.max_steps; ++step) {
            if (ds < c_.ds_min) {
                stats.truncated = true;
                stats.diagnostic = "step size fell below ds_min near r=" + std::to_string(z[dim_]);
                return out;
            }
            const Vector guess = axpy(z, ds, dir);
            Vector cand = guess;
            const int its = correct(cand, dir, guess);
            bool ok = its >= 0;
            Vector delta;
            double len = 0.0;
            if (ok) {
                delta = difference(cand, z);
                len = norm2(delta);
                ok = len > 0.0 && len <= 2.0 * ds && dot(delta, dir) >= 0.9 * len;
            }
            Spectrum cand_spec;
            if (ok) {
                cand_spec = spectrum(cand);
                ok = eigen_jump_ok(spec, cand_spec) || ds <= 10.0 * c_.ds_min;
            }
            if (!ok) {
                ++stats.rejected_steps;
                ds *= 0.5;
                continue;
            }

            const double r_new = cand[dim_];
            if (r_new > r_hi || r_new < r_lo) {
                const double rb = r_new > r_hi ? r_hi : r_lo;
                const double r_old = z[dim_];
                if (r_old == rb) return out;
                const double t = (rb - r_old) / (r_new - r_old);
                const Vector interp = axpy(z, t, delta);
                if (auto zb = solve_at(x_of(interp), rb)) {
                    ++stats.accepted_steps;
                    out.push_back(make_point(std::move(*zb), delta));
                } else {
                    stats.diagnostic = "could not land on the r boundary";
                }
                return out;
            }
            if (max_abs(x_of(cand)) > c_.max_state_norm) {
                stats.truncated = true;
                stats.diagnostic = "state norm exceeded max_state_norm";
                return out;
            }

            ++stats.accepted_steps;
            Point p;
            p.tangent = tangent(cand, delta);
            p.spectrum = std::move(cand_spec);
            p.z = std::move(cand);
            dir = p.tangent;
            z = p.z;
            spec = p.spectrum;
            out.push_back(std::move(p));

            if (its <= 3) {
                ds = std::min(1.5 * ds, c_.ds_max);
            } else if (its >= 6) {
                ds *= 0.7;
            }

            if (out.size() > 10 && norm2(difference(z, start.z)) < 0.5 * ds) {
                stats.diagnostic = "closed loop";
                return out;
            }
        }
        stats.truncated = true;
        stats.diagnostic = "max_steps reached";
        return out;
    }

    [[nodiscard]] BranchPointEntry entry(const Point& p) const {
        BranchPointEntry e;
        e.r = p.z[dim_];
        e.state.assign(p.z.begin(), p.z.begin() + static_cast<std::ptrdiff_t>(dim_));
        e.stability = classify_stability(p.spectrum);
        e.leading_real = p.spectrum.leading_real();
        e.unstable_count = p.spectrum.count_positive_real(0.0);
        e.tangent_r = p.tangent[dim_];
        return e;
    }

private:
    ModelSpec model_;
    ContinuationControls c_;
    std::size_t dim_;
};

void check_range(const ModelSpec& model, double r_lo, double r_hi) {
    validate(model);
    if (!(std::isfinite(r_lo) && std::isfinite(r_hi) && r_lo < r_hi)) {
        throw ContractViolation("continuation needs a finite range with r_lo < r_hi");
    }
    if (model.kind == ModelKind::MutualRepressorRing && r_lo < 0.0) {
        throw ContractViolation("mutual repressor ring needs r >= 0");
    }
}

SpecialPoint describe_special(const Tracer& tr, const Point& p, SpecialKind kind, double test_value) {
    SpecialPoint sp;
    sp.kind = kind;
    sp.r = p.z[tr.dim()];
    sp.state.assign(p.z.begin(), p.z.begin() + static_cast<std::ptrdiff_t>(tr.dim()));
    sp.tangent = p.tangent;
    sp.critical = p.spectrum.critical();
    sp.test_value = test_value;

    const Matrix J = jacobian(tr.at(sp.r), sp.state);
    sp.kernel = kernel_basis(J, 1e-6 * (1.0 + J.norm_inf()));
    if (kind == SpecialKind::LimitPoint) {
        sp.null_direction.assign(p.tangent.begin(), p.tangent.begin() + static_cast<std::ptrdiff_t>(tr.dim()));
        normalize(sp.null_direction);
    } else {
        sp.null_direction = sp.kernel.front();
    }
    return sp;
}

bool is_vertex(const SpecialPoint& sp) { return sp.diagnostic == kVertexNote; }

bool same_point(const SpecialPoint& a, const SpecialPoint& b, double tol) {
    if (std::abs(a.r - b.r) > tol) return false;
    for (std::size_t i = 0; i < a.state.size(); ++i)
        if (std::abs(a.state[i] - b.state[i]) > tol) return false;
    return true;
}

}  // namespace

std::string to_string(SpecialKind kind) {
    switch (kind) {
        case SpecialKind::BranchPoint: return "BP";
        case SpecialKind::LimitPoint: return "LP";
        case SpecialKind::Unclassified: return "Unclassified";
    }
    return "?";
}

Branch trace(const ModelSpec& model, const Vector& start, double r_lo, double r_hi,
             const ContinuationControls& controls) {
    check_range(model, r_lo, r_hi);
    if (start.size() != model.dimension()) throw ContractViolation("trace: start state has wrong dimension");
    if (model.r < r_lo || model.r > r_hi) throw ContractViolation("trace: start r lies outside [r_lo, r_hi]");

    const Tracer tr(model, controls);
    auto z0 = tr.solve_at(start, model.r);
    if (!z0 || max_abs(difference(tr.x_of(*z0), start)) > 1e-4 * (1.0 + max_abs(start))) {
        throw ContractViolation("trace: start is not a steady state of the model");
    }

    Vector t0 = tr.null_tangent(*z0);
    const std::size_t dim = tr.dim();
    if (std::abs(t0[dim]) > 1e-12) {
        if (t0[dim] < 0.0)
            for (double& v : t0) v = -v;
    } else {
        const auto it = std::find_if(t0.begin(), t0.end(), [](double v) { return std::abs(v) > 1e-12; });
        if (it != t0.end() && *it < 0.0)
            for (double& v : t0) v = -v;
    }
    const Point p0 = tr.make_point(std::move(*z0), t0);

    Branch branch;
    branch.origin = "seed at r=" + std::to_string(model.r);
    Vector back_dir = p0.tangent;
    for (double& v : back_dir) v = -v;
    Branch back_stats;
    auto backward = tr.march(p0, back_dir, r_lo, r_hi, back_stats);
    auto forward = tr.march(p0, p0.tangent, r_lo, r_hi, branch);

    branch.accepted_steps += back_stats.accepted_steps;
    branch.rejected_steps += back_stats.rejected_steps;
    branch.truncated = branch.truncated || back_stats.truncated;
    if (!back_stats.diagnostic.empty()) {
        branch.diagnostic = branch.diagnostic.empty() ? back_stats.diagnostic
                                                      : back_stats.diagnostic + "; " + branch.diagnostic;
    }

    std::vector<Point> all;
    all.reserve(backward.size() + forward.size() + 1);
    for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
        for (double& v : it->tangent) v = -v;
        all.push_back(std::move(*it));
    }
    all.push_back(p0);
    for (auto& p : forward) all.push_back(std::move(p));

    for (const auto& p : all) branch.points.push_back(tr.entry(p));
    branch.special_points = detect_special_points(model, branch, controls);
    return branch;
}

std::vector<SpecialPoint> detect_special_points(const ModelSpec& model, const Branch& branch,
                                                const ContinuationControls& controls) {
    const Tracer tr(model, controls);
    const std::size_t dim = tr.dim();
    std::vector<SpecialPoint> found;

    for (std::size_t k = 0; k + 1 < branch.points.size(); ++k) {
        const auto& a = branch.points[k];
        const auto& b = branch.points[k + 1];
        const bool fold = sign(a.tangent_r) * sign(b.tangent_r) < 0;
        const bool crossing = a.unstable_count != b.unstable_count;
        if (!fold && !crossing) continue;

        const Vector za = tr.join(a.state, a.r);
        Vector sec = difference(tr.join(b.state, b.r), za);
        const double length = norm2(sec);
        if (length == 0.0) continue;
        normalize(sec);

        auto eval = [&](double s) -> std::optional<Point> {
            Vector z = axpy(za, s, sec);
            const Vector anchor = z;
            if (tr.correct(z, sec, anchor) < 0) return std::nullopt;
            return tr.make_point(std::move(z), sec);
        };

        double lo = 0.0, hi = length;
        std::optional<Point> best;
        double test = 0.0;
        bool reached = false;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + length); ++it) {
            const double mid = 0.5 * (lo + hi);
            auto p = eval(mid);
            if (!p) break;
            bool left;
            if (fold) {
                test = std::abs(p->tangent[dim]);
                left = sign(p->tangent[dim]) == sign(a.tangent_r);
            } else {
                test = std::abs(p->spectrum.critical().real());
                left = p->spectrum.count_positive_real(0.0) == a.unstable_count;
            }
            best = std::move(p);
            if (test <= controls.special_tol) {
                reached = true;
                break;
            }
            (left ? lo : hi) = mid;
        }
        if (!best) continue;

        SpecialKind kind = SpecialKind::LimitPoint;
        // A branch that runs into a branch point and turns back (pitchfork
        // vertex) also flips dr/ds; there [J f_r] loses rank as well.
        const bool vertex = fold && tr.augmented_rank_gap(best->z) <= kVertexRankTol;
        if (!fold || vertex) {
            kind = std::abs(best->spectrum.critical().imag()) > 1e-6 ? SpecialKind::Unclassified
                                                                     : SpecialKind::BranchPoint;
        }
        SpecialPoint sp = describe_special(tr, *best, kind, test);
        if (kind == SpecialKind::Unclassified) sp.diagnostic = "complex pair crosses the imaginary axis";
        if (vertex) {
            sp.diagnostic = std::string(kVertexNote);
            reached = true;
        }
        if (!reached) {
            if (!sp.diagnostic.empty()) sp.diagnostic += "; ";
            sp.diagnostic += "test function not resolved below tolerance";
        }
        found.push_back(std::move(sp));
    }
    return found;
}

std::vector<Branch> branch_switch(const ModelSpec& model, const SpecialPoint& bp, double r_lo, double r_hi,
                                  const ContinuationControls& controls) {
    check_range(model, r_lo, r_hi);
    if (bp.kind == SpecialKind::LimitPoint) throw ContractViolation("branch_switch needs a branch point");
    if (bp.state.size() != model.dimension()) throw ContractViolation("branch_switch: state has wrong dimension");

    const Tracer tr(model, controls);
    const std::size_t dim = tr.dim();
    const Vector zbp = tr.join(bp.state, bp.r);

    std::vector<Vector> kernel = bp.kernel;
    if (kernel.empty()) {
        const Matrix J = jacobian(tr.at(bp.r), bp.state);
        kernel = kernel_basis(J, 1e-6 * (1.0 + J.norm_inf()));
    }

    std::vector<Vector> dirs;
    if (kernel.size() == 2) {
        constexpr int kAngles = 24;
        for (int k = 0; k < kAngles; ++k) {
            const double th = 2.0 * std::numbers::pi * k / kAngles;
            Vector v(dim);
            for (std::size_t i = 0; i < dim; ++i) v[i] = std::cos(th) * kernel[0][i] + std::sin(th) * kernel[1][i];
            dirs.push_back(std::move(v));
        }
    } else {
        for (const auto& v : kernel) {
            dirs.push_back(v);
            Vector m = v;
            for (double& x : m) x = -x;
            dirs.push_back(std::move(m));
        }
    }

    // With a two-dimensional kernel the cubic terms are often rotation
    // invariant, so the branch directions only separate at higher order and a
    // larger offset is needed to resolve them above the corrector tolerance.
    const double eps = controls.switch_eps > 0.0 ? controls.switch_eps
                                                 : (kernel.size() >= 2 ? 2e-2 : 1e-3) * (1.0 + max_abs(bp.state));
    std::vector<Vector> seeds;
    for (auto& v : dirs) {
        normalize(v);
        Vector row(v);
        row.push_back(0.0);
        Vector z = axpy(zbp, eps, row);
        const Vector anchor = z;
        // the start sits next to a singular point, so Newton may only converge linearly
        if (tr.correct(z, row, anchor, 60) < 0) continue;

        Vector w = difference(z, zbp);
        const double wn = norm2(w);
        if (wn > 100.0 * eps || wn == 0.0) continue;
        if (bp.tangent.size() == dim + 1) {
            const double along = dot(w, bp.tangent);
            Vector perp = axpy(w, -along, bp.tangent);
            if (norm2(perp) < 0.3 * eps) continue;  // back on the parent branch
        }
        bool duplicate = false;
        for (const auto& s : seeds) {
            const Vector u = difference(s, zbp);
            if (dot(u, w) > 0.99 * norm2(u) * wn) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) seeds.push_back(std::move(z));
    }

    std::vector<Branch> out;
    for (const auto& seed : seeds) {
        Branch branch;
        branch.origin = "branch point at r=" + std::to_string(bp.r);
        const Vector away = difference(seed, zbp);
        const Point p0 = tr.make_point(seed, away);
        auto tail = tr.march(p0, p0.tangent, r_lo, r_hi, branch);
        branch.points.push_back(tr.entry(p0));
        for (const auto& p : tail) branch.points.push_back(tr.entry(p));
        branch.special_points = detect_special_points(model, branch, controls);
        out.push_back(std::move(branch));
    }
    return out;
}

double distance_to_branch(const ModelSpec& model, const Branch& branch, std::span<const double> state, double r,
                          const ContinuationControls& controls) {
    if (branch.points.empty()) return std::numeric_limits<double>::infinity();
    const Tracer tr(model, controls);
    const Vector z = tr.join(state, r);

    auto endpoint = [&](std::size_t k) { return tr.join(branch.points[k].state, branch.points[k].r); };
    if (branch.points.size() == 1) return norm2(difference(z, endpoint(0)));

    struct Near {
        double coarse;
        std::size_t k;
    };
    std::vector<Near> near;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < branch.points.size(); ++k) {
        const Vector za = endpoint(k);
        const Vector seg = difference(endpoint(k + 1), za);
        const double len2 = dot(seg, seg);
        const Vector rel = difference(z, za);
        const double t = len2 > 0.0 ? std::clamp(dot(rel, seg) / len2, 0.0, 1.0) : 0.0;
        const double d = norm2(axpy(rel, -t, seg));
        best = std::min(best, d);
        near.push_back({d, k});
    }
    if (best > 0.25) return best;

    double refined = best;
    for (const auto& [coarse, k] : near) {
        if (coarse > 2.0 * best + 1e-12) continue;
        const Vector za = endpoint(k);
        Vector sec = difference(endpoint(k + 1), za);
        const double len = norm2(sec);
        if (len == 0.0) continue;
        normalize(sec);
        const double s = std::clamp(dot(difference(z, za), sec), 0.0, len);
        Vector p = axpy(za, s, sec);
        const Vector anchor = p;
        if (tr.correct(p, sec, anchor) < 0) continue;
        refined = std::min(refined, norm2(difference(z, p)));
    }
    return refined;
}

std::vector<SpecialPoint> Diagram::special_points(SpecialKind kind, double tol) const {
    std::vector<SpecialPoint> out;
    std::vector<const SpecialPoint*> vertices;
    for (const auto& b : branches) {
        for (const auto& sp : b.special_points) {
            if (sp.kind != kind) continue;
            if (is_vertex(sp)) {
                vertices.push_back(&sp);
                continue;
            }
            const bool seen =
                std::any_of(out.begin(), out.end(), [&](const SpecialPoint& q) { return same_point(sp, q, tol); });
            if (!seen) out.push_back(sp);
        }
    }
    // a vertex is only located to about sqrt of the bisection accuracy in x
    for (const SpecialPoint* v : vertices) {
        const bool seen =
            std::any_of(out.begin(), out.end(), [&](const SpecialPoint& q) { return same_point(*v, q, kVertexMatchTol); });
        if (!seen) out.push_back(*v);
    }
    return out;
}

Diagram build_diagram(ModelKind kind, int n, double p, double r_lo, double r_hi, const ContinuationControls& controls) {
    const ModelSpec base = ModelSpec::make(kind, n, r_lo, p);
    check_range(base, r_lo, r_hi);

    Diagram dg;
    dg.kind = kind;
    dg.n = n;
    dg.p = p;
    dg.r_lo = r_lo;
    dg.r_hi = r_hi;

    struct Seed {
        Vector x;
        double r;
    };
    std::vector<Seed> seeds;
    for (double r : {r_lo, r_hi}) {
        try {
            for (const auto& s : synchronous_states(kind, n, r, p)) seeds.push_back({s.expand(base.with_r(r)), r});
        } catch (const NoPositiveEquilibrium&) {
        }
    }
    for (double f : controls.sample_fractions) {
        const double r = r_lo + std::clamp(f, 0.0, 1.0) * (r_hi - r_lo);
        for (auto& s : find_all(base.with_r(r), controls.search)) seeds.push_back({std::move(s.state), r});
    }

    const double on_tol = 1e-6;
    auto on_existing = [&](std::span<const double> x, double r) {
        const double tol = on_tol * (1.0 + max_abs(x));
        return std::any_of(dg.branches.begin(), dg.branches.end(), [&](const Branch& b) {
            return distance_to_branch(base, b, x, r, controls) <= tol;
        });
    };
    auto is_duplicate = [&](const Branch& nb) {
        const std::size_t m = nb.points.size();
        std::vector<std::size_t> probes;
        if (m < 4) {
            for (std::size_t i = 0; i < m; ++i) probes.push_back(i);
        } else {
            probes = {m / 4, m / 2, (3 * m) / 4};
        }
        for (const auto& b : dg.branches) {
            const bool all_on = std::all_of(probes.begin(), probes.end(), [&](std::size_t i) {
                const auto& e = nb.points[i];
                return distance_to_branch(base, b, e.state, e.r, controls) <= on_tol * (1.0 + max_abs(e.state));
            });
            if (all_on) return true;
        }
        return false;
    };
    auto full = [&] {
        if (static_cast<int>(dg.branches.size()) >= controls.max_branches) {
            dg.truncated = true;
            return true;
        }
        return false;
    };

    for (const auto& s : seeds) {
        if (full()) break;
        if (on_existing(s.x, s.r)) continue;
        Branch b = trace(base.with_r(s.r), s.x, r_lo, r_hi, controls);
        if (b.points.empty() || is_duplicate(b)) continue;
        dg.branches.push_back(std::move(b));
    }

    std::vector<SpecialPoint> processed;
    for (std::size_t i = 0; i < dg.branches.size() && !dg.truncated; ++i) {
        const std::vector<SpecialPoint> sps = dg.branches[i].special_points;
        for (const auto& sp : sps) {
            if (sp.kind != SpecialKind::BranchPoint || is_vertex(sp)) continue;
            const bool seen = std::any_of(processed.begin(), processed.end(),
                                          [&](const SpecialPoint& q) { return same_point(sp, q, on_tol); });
            if (seen) continue;
            processed.push_back(sp);
            for (auto& nb : branch_switch(base, sp, r_lo, r_hi, controls)) {
                if (full()) break;
                if (nb.points.size() < 2 || is_duplicate(nb)) continue;
                dg.branches.push_back(std::move(nb));
            }
            if (dg.truncated) break;
        }
    }
    return dg;
}

}  // namespace ringbif
