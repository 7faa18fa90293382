#pragma once

#include <span>
#include <vector>

#include "ringbif/model.hpp"
#include "ringbif/numerics/eigen.hpp"

namespace ringbif {

/// Thrown for repressor rings with p >= 1, where no positive synchronous
/// equilibrium exists.
class NoPositiveEquilibrium : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A state in which every cell holds the same value. For the normal form
/// y mirrors x and is ignored.
struct SynchronousState {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] Vector expand(const ModelSpec& model) const;
};

/// Normal form: {0} when r <= -p, else {0, +sqrt(r+p), -sqrt(r+p)}.
/// Repressor: the symmetric x = y state and, past the pitchfork, the pair
/// (x, y), (y, x); each is checked to satisfy ||rhs||_inf <= 1e-12.
[[nodiscard]] std::vector<SynchronousState> synchronous_states(ModelKind kind, int n, double r, double p);

/// Eigenvalues (r - 3 alpha^2) + p cos(2 pi k / n), k = 0..n-1, of the circulant
/// Jacobian at a normal-form synchronous state.
[[nodiscard]] Spectrum circulant_spectrum(double alpha, int n, double r, double p);

struct BifurcationPrediction {
    double primary_branch_point_r = 0.0;
    double secondary_branch_point_r = 0.0;
    double zero_state_destabilization_r = 0.0;
    double nonzero_branch_stabilization_r = 0.0;
};

/// Thresholds for the normal-form ring, taken from max over k of the
/// circulant eigenvalues so that even and odd n share one formula.
[[nodiscard]] BifurcationPrediction predict_bifurcations(int n, double p);

struct BoundCheck {
    bool satisfied = false;
    double bound = 0.0;     // sqrt(r + p)
    double extremum = 0.0;  // max_i |x_i|
};

/// p > 0: nonsynchronous states satisfy max |x_i| < sqrt(r+p).
/// p < 0: they satisfy max |x_i| > sqrt(r+p).
[[nodiscard]] BoundCheck nonsync_bound_check(std::span<const double> state, double r, double p);

/// The synchronous-subspace dynamics: dx/dt = (r + p) x - x^3 for the normal
/// form, and the two-variable system r/(1+y^2) + (p-1) x, r/(1+x^2) + (p-1) y
/// for the repressor.
[[nodiscard]] Vector reduced_rhs(ModelKind kind, double r, double p, std::span<const double> reduced_state);

}  // namespace ringbif
