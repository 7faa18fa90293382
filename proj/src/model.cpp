#include "ringbif/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringbif/numerics/linalg.hpp"

namespace ringbif {

namespace {

void check_dimension(const ModelSpec& model, std::size_t size, const char* what) {
    if (size != model.dimension()) {
        throw ContractViolation(std::string(what) + ": state has dimension " + std::to_string(size) +
                                ", model expects " + std::to_string(model.dimension()));
    }
}

inline std::size_t wrap(long i, long n) noexcept {
    return static_cast<std::size_t>(((i % n) + n) % n);
}

}  // namespace

std::string to_string(ModelKind kind) {
    return kind == ModelKind::NormalFormRing ? "normal" : "repressor";
}

ModelSpec ModelSpec::normal_form(int n, double r, double p) {
    return make(ModelKind::NormalFormRing, n, r, p);
}

ModelSpec ModelSpec::repressor(int n, double r, double p) {
    return make(ModelKind::MutualRepressorRing, n, r, p);
}

ModelSpec ModelSpec::make(ModelKind kind, int n, double r, double p) {
    ModelSpec m{kind, n, r, p};
    validate(m);
    return m;
}

void validate(const ModelSpec& model) {
    if (model.n < 3) {
        throw ContractViolation("ring needs at least 3 cells, got n = " + std::to_string(model.n));
    }
    if (!std::isfinite(model.r) || !std::isfinite(model.p)) {
        throw ContractViolation("model parameters must be finite");
    }
    if (model.kind == ModelKind::MutualRepressorRing && model.r < 0.0) {
        throw ContractViolation("mutual repressor requires r >= 0");
    }
}

void rhs_into(const ModelSpec& model, std::span<const double> x, std::span<double> out) {
    check_dimension(model, x.size(), "rhs");
    check_dimension(model, out.size(), "rhs output");
    const long n = model.n;
    const double r = model.r;
    const double half_p = 0.5 * model.p;

    if (model.kind == ModelKind::NormalFormRing) {
        for (long i = 0; i < n; ++i) {
            const double xi = x[i];
            out[i] = r * xi - xi * xi * xi + half_p * (x[wrap(i - 1, n)] + x[wrap(i + 1, n)]);
        }
        return;
    }

    const auto xs = x.subspan(0, n);
    const auto ys = x.subspan(n, n);
    for (long i = 0; i < n; ++i) {
        const double xi = xs[i];
        const double yi = ys[i];
        out[i] = r / (1.0 + yi * yi) - xi + half_p * (xs[wrap(i - 1, n)] + xs[wrap(i + 1, n)]);
        out[n + i] = r / (1.0 + xi * xi) - yi + half_p * (ys[wrap(i - 1, n)] + ys[wrap(i + 1, n)]);
    }
}

Vector rhs(const ModelSpec& model, std::span<const double> state) {
    Vector out(model.dimension());
    rhs_into(model, state, out);
    return out;
}

Vector rhs_dr(const ModelSpec& model, std::span<const double> x) {
    check_dimension(model, x.size(), "rhs_dr");
    if (model.kind == ModelKind::NormalFormRing) {
        return Vector(x.begin(), x.end());
    }
    const std::size_t n = static_cast<std::size_t>(model.n);
    Vector out(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = 1.0 / (1.0 + x[n + i] * x[n + i]);
        out[n + i] = 1.0 / (1.0 + x[i] * x[i]);
    }
    return out;
}

void jacobian_into(const ModelSpec& model, std::span<const double> x, Matrix& J) {
    check_dimension(model, x.size(), "jacobian");
    const std::size_t dim = model.dimension();
    if (J.rows() != dim || J.cols() != dim) {
        J.resize(dim, dim);
    } else {
        J.fill(0.0);
    }
    const long n = model.n;
    const double half_p = 0.5 * model.p;
    const double r = model.r;

    if (model.kind == ModelKind::NormalFormRing) {
        for (long i = 0; i < n; ++i) {
            J(i, i) = r - 3.0 * x[i] * x[i];
            J(i, wrap(i - 1, n)) = half_p;
            J(i, wrap(i + 1, n)) = half_p;
        }
        return;
    }

    for (long i = 0; i < n; ++i) {
        const std::size_t xi = static_cast<std::size_t>(i);
        const std::size_t yi = static_cast<std::size_t>(n + i);
        const double yv = x[yi];
        const double xv = x[xi];
        const double dy = 1.0 + yv * yv;
        const double dx = 1.0 + xv * xv;

        J(xi, xi) = -1.0;
        J(xi, wrap(i - 1, n)) = half_p;
        J(xi, wrap(i + 1, n)) = half_p;
        J(xi, yi) = -2.0 * r * yv / (dy * dy);

        J(yi, yi) = -1.0;
        J(yi, n + wrap(i - 1, n)) = half_p;
        J(yi, n + wrap(i + 1, n)) = half_p;
        J(yi, xi) = -2.0 * r * xv / (dx * dx);
    }
}

Matrix jacobian(const ModelSpec& model, std::span<const double> state) {
    Matrix J;
    jacobian_into(model, state, J);
    return J;
}

double max_abs(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

// Symmetries ----------------------------------------------------------------

std::string SymmetryOp::name() const {
    switch (kind) {
        case Kind::CyclicShift: return "CyclicShift(" + std::to_string(shift) + ")";
        case Kind::Reflection: return "Reflection";
        case Kind::SignFlip: return "SignFlip";
        case Kind::XYSwap: return "XYSwap";
    }
    return "?";
}

bool applicable(const SymmetryOp& op, ModelKind kind) noexcept {
    switch (op.kind) {
        case SymmetryOp::Kind::SignFlip: return kind == ModelKind::NormalFormRing;
        case SymmetryOp::Kind::XYSwap: return kind == ModelKind::MutualRepressorRing;
        default: return true;
    }
}

namespace {

Vector permute_cells(const ModelSpec& model, std::span<const double> state, int shift, bool reflect) {
    const long n = model.n;
    const long blocks = model.kind == ModelKind::NormalFormRing ? 1 : 2;
    Vector out(state.size());
    // cell i lands on (+-i + shift) mod n
    for (long b = 0; b < blocks; ++b) {
        for (long i = 0; i < n; ++i) {
            const long dest = wrap((reflect ? -i : i) + shift, n);
            out[b * n + dest] = state[b * n + i];
        }
    }
    return out;
}

}  // namespace

Vector apply_symmetry(const SymmetryOp& op, const ModelSpec& model, std::span<const double> state) {
    check_dimension(model, state.size(), "apply_symmetry");
    if (!applicable(op, model.kind)) {
        throw ContractViolation(op.name() + " does not act on the " + to_string(model.kind) + " model");
    }
    switch (op.kind) {
        case SymmetryOp::Kind::CyclicShift: return permute_cells(model, state, op.shift, false);
        case SymmetryOp::Kind::Reflection: return permute_cells(model, state, 0, true);
        case SymmetryOp::Kind::SignFlip: {
            Vector out(state.begin(), state.end());
            for (double& v : out) v = -v;
            return out;
        }
        case SymmetryOp::Kind::XYSwap: {
            const std::size_t n = static_cast<std::size_t>(model.n);
            Vector out(state.size());
            std::copy(state.begin() + n, state.end(), out.begin());
            std::copy(state.begin(), state.begin() + n, out.begin() + n);
            return out;
        }
    }
    return {};
}

std::vector<GroupElement> symmetry_group(const ModelSpec& model) {
    std::vector<GroupElement> group;
    group.reserve(4 * static_cast<std::size_t>(model.n));
    for (int inv = 0; inv < 2; ++inv) {
        for (int refl = 0; refl < 2; ++refl) {
            for (int k = 0; k < model.n; ++k) {
                group.push_back({k, refl == 1, inv == 1});
            }
        }
    }
    return group;
}

Vector apply_group_element(const GroupElement& g, const ModelSpec& model, std::span<const double> state) {
    Vector out = permute_cells(model, state, g.shift, g.reflect);
    if (g.involution) {
        const auto op = model.kind == ModelKind::NormalFormRing ? SymmetryOp::sign_flip() : SymmetryOp::xy_swap();
        out = apply_symmetry(op, model, out);
    }
    return out;
}

std::vector<SymmetryOp> applicable_generators(ModelKind kind) {
    std::vector<SymmetryOp> ops{SymmetryOp::cyclic_shift(1), SymmetryOp::reflection()};
    ops.push_back(kind == ModelKind::NormalFormRing ? SymmetryOp::sign_flip() : SymmetryOp::xy_swap());
    return ops;
}

}  // namespace ringbif
