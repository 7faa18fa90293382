#include "ringbif/numerics/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ringbif/numerics/linalg.hpp"
#include "ringbif/numerics/newton.hpp"

namespace ringbif {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (error weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// Integrates until `done(t, f(x))` or t_end; `cap(x)` bounds the next step.
// Shared by the steady-state and fixed-time drivers.
template <class Done, class Cap>
IntegrationResult dopri(const RhsFunction& f, Vector x, double t_end, const IntegrationControls& controls,
                        Done&& done, Cap&& cap) {
    const std::size_t n = x.size();
    IntegrationResult out;
    Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), x_new(n);

    f(x, k1);
    double t = 0.0;
    double h = controls.initial_step;
    constexpr double safety = 0.9, min_factor = 0.2, max_factor = 10.0;
    const double h_min = 1e-14;

    bool finished = done(t, k1);
    while (!finished) {
        if (t >= t_end) {
            out.diagnostic = "end time reached before the stop condition";
            break;
        }
        if (out.steps + out.rejected >= controls.max_steps) {
            out.diagnostic = "max_steps exceeded";
            break;
        }
        h = std::min({h, cap(x), t_end - t});

        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * a21 * k1[i];
        f(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            x_new[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(x_new, k7);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = controls.abs_tol + controls.rel_tol * std::max(std::abs(x[i]), std::abs(x_new[i]));
            const double q = ei / scale;
            err += q * q;
            finite = finite && std::isfinite(x_new[i]);
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (finite && err <= 1.0) {
            // land exactly on t_end when the step was clipped to it
            t = (t_end - t <= h) ? t_end : t + h;
            x.swap(x_new);
            k1.swap(k7);
            ++out.steps;
            finished = done(t, k1);
            const double factor = err == 0.0 ? max_factor : std::clamp(safety * std::pow(err, -0.2), min_factor, max_factor);
            h *= factor;
        } else {
            ++out.rejected;
            const double factor = finite ? std::clamp(safety * std::pow(err, -0.2), min_factor, 1.0) : min_factor;
            h *= factor;
            if (h < h_min) {
                out.diagnostic = "step size underflow";
                break;
            }
        }
    }
    out.t_reached = t;
    out.converged = finished;
    out.terminal = std::move(x);
    return out;
}

RhsFunction model_rhs(const ModelSpec& model) {
    return [model](std::span<const double> x, std::span<double> out) { rhs_into(model, x, out); };
}

void check_controls(const IntegrationControls& c) {
    if (!(c.rel_tol > 0 && c.abs_tol > 0 && c.t_max > 0 && c.steady_norm_tol > 0)) {
        throw ContractViolation("integration tolerances and t_max must be positive");
    }
}

}  // namespace

IntegrationResult integrate_to_steady(const ModelSpec& model, Vector x0, const IntegrationControls& controls) {
    check_controls(controls);
    const std::size_t n = model.dimension();
    if (x0.size() != n) throw ContractViolation("integrate_to_steady: initial state has wrong dimension");

    // Near a stable equilibrium an uncapped step settles on the stability
    // limit, where the fastest mode stops decaying and the residual stalls
    // around the local error tolerance. 2 / ||J||_inf keeps h*lambda inside
    // the real stability interval of the scheme.
    Matrix J(n, n);
    auto cap = [&](std::span<const double> x) {
        jacobian_into(model, x, J);
        const double norm = J.norm_inf();
        return norm > 0.0 ? 2.0 / norm : std::numeric_limits<double>::infinity();
    };
    auto out = dopri(model_rhs(model), std::move(x0), controls.t_max, controls,
                     [&](double, std::span<const double> fx) { return max_abs(fx) <= controls.steady_norm_tol; }, cap);
    if (!out.converged && out.diagnostic == "end time reached before the stop condition") {
        out.diagnostic = "t_max reached before steady state";
    }
    Vector& x = out.terminal;
    if (out.converged) {
        const ModelSpec m = model;
        auto system = [&m](std::span<const double> z, Vector& f, Matrix& J) {
            rhs_into(m, z, f);
            jacobian_into(m, z, J);
        };
        NewtonOptions opts;
        opts.max_iter = 20;
        const auto polished = newton_refine(system, x, opts);
        if (polished.converged) {
            // keep the polish only when it stays next to the integrated state
            Vector diff(n);
            for (std::size_t i = 0; i < n; ++i) diff[i] = polished.root[i] - x[i];
            if (max_abs(diff) <= 1e-4 * (1.0 + max_abs(x))) x = polished.root;
        }
    }
    out.residual = max_abs(rhs(model, x));
    return out;
}

IntegrationResult integrate_until(const RhsFunction& f, Vector x0, double t_end, const IntegrationControls& controls) {
    check_controls(controls);
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ContractViolation("integrate_until: t_end must be finite and >= 0");
    auto out = dopri(f, std::move(x0), t_end, controls, [&](double t, std::span<const double>) { return t >= t_end; },
                     [](std::span<const double>) { return std::numeric_limits<double>::infinity(); });
    Vector fx(out.terminal.size());
    f(out.terminal, fx);
    out.residual = max_abs(fx);
    return out;
}

IntegrationResult integrate_until(const ModelSpec& model, Vector x0, double t_end, const IntegrationControls& controls) {
    if (x0.size() != model.dimension()) throw ContractViolation("integrate_until: initial state has wrong dimension");
    return integrate_until(model_rhs(model), std::move(x0), t_end, controls);
}

}  // namespace ringbif
