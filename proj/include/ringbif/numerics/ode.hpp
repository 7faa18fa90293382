#pragma once

#include <functional>
#include <string>

#include "ringbif/model.hpp"

namespace ringbif {

struct IntegrationControls {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double t_max = 1e4;
    double steady_norm_tol = 1e-9;  // on ||rhs||_inf
    long max_steps = 2'000'000;
    double initial_step = 1e-3;
};

struct IntegrationResult {
    Vector terminal;
    bool converged = false;
    double t_reached = 0.0;
    long steps = 0;
    long rejected = 0;
    double residual = 0.0;
    std::string diagnostic;
};

/// out = f(x); autonomous.
using RhsFunction = std::function<void(std::span<const double> x, std::span<double> out)>;

/// Dormand-Prince 5(4) with the usual error-per-step controller. Stops once
/// ||rhs||_inf <= steady_norm_tol, then polishes the terminal state with Newton.
[[nodiscard]] IntegrationResult integrate_to_steady(const ModelSpec& model, Vector x0,
                                                    const IntegrationControls& controls = {});

/// Same scheme up to a fixed time; the last step is shortened to land on
/// t_end. `converged` means t_end was reached.
[[nodiscard]] IntegrationResult integrate_until(const RhsFunction& f, Vector x0, double t_end,
                                                const IntegrationControls& controls = {});
[[nodiscard]] IntegrationResult integrate_until(const ModelSpec& model, Vector x0, double t_end,
                                                const IntegrationControls& controls = {});

}  // namespace ringbif
