#include "ringbif/numerics/newton.hpp"

#include <cmath>

#include "ringbif/model.hpp"

namespace ringbif {

NewtonResult newton_refine(const SystemFunction& system, Vector guess, const NewtonOptions& options) {
    NewtonResult result;
    const std::size_t n = guess.size();
    Vector f(n), f_trial(n);
    Matrix J(n, n), J_trial(n, n);

    Vector x = std::move(guess);
    system(x, f, J);
    double norm = max_abs(f);

    for (int it = 0;; ++it) {
        result.iterations = it;
        if (!std::isfinite(norm)) {
            result.failure = "residual is not finite";
            break;
        }
        if (norm <= options.tol) {
            result.converged = true;
            break;
        }
        if (it >= options.max_iter) {
            result.failure = "iteration limit reached";
            break;
        }

        Vector step;
        try {
            step = solve_linear(J, f);
        } catch (const SingularMatrix& e) {
            result.failure = e.what();
            break;
        }

        double lambda = 1.0;
        Vector trial(n);
        for (int h = 0;; ++h) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - lambda * step[i];
            system(trial, f_trial, J_trial);
            const double trial_norm = max_abs(f_trial);
            if (trial_norm <= norm || h >= options.max_halvings) break;
            lambda *= 0.5;
        }
        result.last_step = lambda * max_abs(step);
        x.swap(trial);
        f.swap(f_trial);
        std::swap(J, J_trial);
        norm = max_abs(f);
    }

    result.root = std::move(x);
    result.residual = norm;
    return result;
}

}  // namespace ringbif
