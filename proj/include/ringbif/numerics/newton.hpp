#pragma once

#include <functional>
#include <span>
#include <string>

#include "ringbif/numerics/linalg.hpp"

namespace ringbif {

/// Evaluates the residual f(x) and its Jacobian at x.
using SystemFunction = std::function<void(std::span<const double> x, Vector& f, Matrix& J)>;

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 100;
    int max_halvings = 8;
};

/// Failure is reported through `converged == false`, never by throwing.
struct NewtonResult {
    Vector root;
    double residual = 0.0;
    int iterations = 0;
    double last_step = 0.0;  // ||dx||_inf of the final accepted update
    bool converged = false;
    std::string failure;
};

/// Damped Newton: the step is halved (up to max_halvings times) while the
/// full step would increase ||f||_inf.
[[nodiscard]] NewtonResult newton_refine(const SystemFunction& system, Vector guess,
                                         const NewtonOptions& options = {});

}  // namespace ringbif
