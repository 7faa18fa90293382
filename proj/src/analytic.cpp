#include "ringbif/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ringbif {

namespace {

constexpr double kSyncResidualTol = 1e-12;
constexpr int kScanIntervals = 10'000;

// Bisection down to adjacent doubles; assumes f(lo) and f(hi) differ in sign.
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (f(hi) == 0.0) return hi;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double normalize_zero(double v) { return v == 0.0 ? 0.0 : v; }

}  // namespace

Vector SynchronousState::expand(const ModelSpec& model) const {
    const std::size_t n = static_cast<std::size_t>(model.n);
    if (model.kind == ModelKind::NormalFormRing) return Vector(n, x);
    Vector v(2 * n);
    std::fill(v.begin(), v.begin() + n, x);
    std::fill(v.begin() + n, v.end(), y);
    return v;
}

std::vector<SynchronousState> synchronous_states(ModelKind kind, int n, double r, double p) {
    const ModelSpec model = ModelSpec::make(kind, n, r, p);
    std::vector<SynchronousState> states;

    if (kind == ModelKind::NormalFormRing) {
        states.push_back({0.0, 0.0});
        if (r + p > 0.0) {
            const double a = std::sqrt(r + p);
            states.push_back({a, a});
            states.push_back({-a, -a});
        }
    } else {
        if (p >= 1.0) {
            throw NoPositiveEquilibrium("mutual repressor ring has no positive synchronous equilibrium for p >= 1");
        }
        const double c = 1.0 - p;
        const double top = r / c;

        // symmetric branch: c s (1 + s^2) = r, monotone in s
        const double s = top == 0.0 ? 0.0 : bisect([&](double v) { return c * v * (1.0 + v * v) - r; }, 0.0, top);
        states.push_back({s, s});

        // asymmetric pairs: y = r / (c (1 + x^2)) substituted into the x-equation
        auto y_of = [&](double x) { return r / (c * (1.0 + x * x)); };
        auto h = [&](double x) {
            const double y = y_of(x);
            return x - r / (c * (1.0 + y * y));
        };
        std::vector<double> roots;
        if (top > 0.0) {
            double prev_x = 0.0;
            double prev_h = h(prev_x);
            for (int i = 1; i <= kScanIntervals; ++i) {
                const double x = top * static_cast<double>(i) / kScanIntervals;
                const double hx = h(x);
                if (prev_h == 0.0) {
                    roots.push_back(prev_x);
                } else if ((prev_h < 0.0) != (hx < 0.0) && hx != 0.0) {
                    roots.push_back(bisect(h, prev_x, x));
                }
                prev_x = x;
                prev_h = hx;
            }
            if (prev_h == 0.0) roots.push_back(prev_x);
        }
        std::sort(roots.begin(), roots.end(), std::greater<>());
        for (double x : roots) {
            const double y = y_of(x);
            if (std::abs(x - y) <= 1e-9 * (1.0 + std::abs(x))) continue;
            states.push_back({x, y});
        }
    }

    for (const auto& st : states) {
        const double res = max_abs(rhs(model, st.expand(model)));
        if (!(res <= kSyncResidualTol)) {
            throw NumericalFailure("synchronous state failed residual check: " + std::to_string(res));
        }
    }
    return states;
}

Spectrum circulant_spectrum(double alpha, int n, double r, double p) {
    Spectrum spec;
    const double diag = r - 3.0 * alpha * alpha;
    for (int k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / n;
        spec.values.emplace_back(diag + p * std::cos(theta), 0.0);
    }
    spec.sort();
    return spec;
}

BifurcationPrediction predict_bifurcations(int n, double p) {
    if (n < 3) throw ContractViolation("predict_bifurcations needs n >= 3");
    // max_k p cos(2 pi k / n)
    double max_coupling = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        max_coupling = std::max(max_coupling, p * std::cos(2.0 * std::numbers::pi * k / n));
    }
    BifurcationPrediction pred;
    pred.primary_branch_point_r = normalize_zero(-p);
    pred.secondary_branch_point_r = normalize_zero(-p * std::cos(2.0 * std::numbers::pi / n));
    // r + max_coupling = 0
    pred.zero_state_destabilization_r = normalize_zero(-max_coupling);
    // -2r - 3p + max_coupling = 0
    pred.nonzero_branch_stabilization_r = normalize_zero(0.5 * (max_coupling - 3.0 * p));
    return pred;
}

BoundCheck nonsync_bound_check(std::span<const double> state, double r, double p) {
    if (state.empty()) throw ContractViolation("nonsync_bound_check: empty state");
    if (!(r + p > 0.0)) throw ContractViolation("nonsync_bound_check requires r + p > 0");
    double spread = 0.0;
    for (double v : state) spread = std::max(spread, std::abs(v - state[0]));
    if (spread <= 1e-8) throw ContractViolation("nonsync_bound_check: state is synchronous");

    BoundCheck out;
    out.bound = std::sqrt(r + p);
    out.extremum = max_abs(state);
    if (p > 0.0) {
        out.satisfied = out.extremum < out.bound;
    } else if (p < 0.0) {
        out.satisfied = out.extremum > out.bound;
    } else {
        // uncoupled cells sit exactly on 0 or +-sqrt(r)
        out.satisfied = std::abs(out.extremum - out.bound) <= 1e-9 * (1.0 + out.bound);
    }
    return out;
}

Vector reduced_rhs(ModelKind kind, double r, double p, std::span<const double> z) {
    if (kind == ModelKind::NormalFormRing) {
        if (z.size() != 1) throw ContractViolation("reduced normal form is one-dimensional");
        const double x = z[0];
        return {(r + p) * x - x * x * x};
    }
    if (z.size() != 2) throw ContractViolation("reduced repressor system is two-dimensional");
    const double x = z[0];
    const double y = z[1];
    return {r / (1.0 + y * y) + (p - 1.0) * x, r / (1.0 + x * x) + (p - 1.0) * y};
}

}  // namespace ringbif
