#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringbif {

using Vector = std::vector<double>;

/// Raised when a caller breaks an operation's preconditions (bad dimensions,
/// inapplicable symmetry, invalid model parameters).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ModelKind { NormalFormRing, MutualRepressorRing };

[[nodiscard]] std::string to_string(ModelKind kind);

/// A ring of n identical cells with nearest-neighbour averaging coupling.
///
/// NormalFormRing:       dx_i/dt = r x_i - x_i^3 + p (x_{i-1} + x_{i+1}) / 2
/// MutualRepressorRing:  dx_i/dt = r / (1 + y_i^2) - x_i + p (x_{i-1} + x_{i+1}) / 2
///                       dy_i/dt = r / (1 + x_i^2) - y_i + p (y_{i-1} + y_{i+1}) / 2
///
/// Repressor states use block layout (x_1..x_n, y_1..y_n).
struct ModelSpec {
    ModelKind kind = ModelKind::NormalFormRing;
    int n = 3;
    double r = 0.0;
    double p = 0.0;

    /// Validating constructors. n >= 3 always; the repressor also needs r >= 0.
    [[nodiscard]] static ModelSpec normal_form(int n, double r, double p);
    [[nodiscard]] static ModelSpec repressor(int n, double r, double p);
    [[nodiscard]] static ModelSpec make(ModelKind kind, int n, double r, double p);

    [[nodiscard]] std::size_t dimension() const noexcept {
        return kind == ModelKind::NormalFormRing ? static_cast<std::size_t>(n)
                                                 : 2 * static_cast<std::size_t>(n);
    }

    /// Copy with a different bifurcation parameter. Not re-validated: continuation
    /// probes r slightly outside the physical range while correcting.
    [[nodiscard]] ModelSpec with_r(double new_r) const noexcept {
        ModelSpec m = *this;
        m.r = new_r;
        return m;
    }
};

void validate(const ModelSpec& model);

class Matrix;

/// Writes dx/dt into `out`. Throws ContractViolation on dimension mismatch.
void rhs_into(const ModelSpec& model, std::span<const double> state, std::span<double> out);
[[nodiscard]] Vector rhs(const ModelSpec& model, std::span<const double> state);

/// Partial derivative of the vector field with respect to r.
[[nodiscard]] Vector rhs_dr(const ModelSpec& model, std::span<const double> state);

/// Exact analytical Jacobian. For the normal form the matrix is symmetric by
/// construction: diagonal r - 3 x_i^2, ring neighbours p/2.
[[nodiscard]] Matrix jacobian(const ModelSpec& model, std::span<const double> state);
void jacobian_into(const ModelSpec& model, std::span<const double> state, Matrix& out);

[[nodiscard]] double max_abs(std::span<const double> v) noexcept;

// Symmetries ----------------------------------------------------------------

struct SymmetryOp {
    enum class Kind { CyclicShift, Reflection, SignFlip, XYSwap };

    Kind kind = Kind::CyclicShift;
    int shift = 0;

    [[nodiscard]] static SymmetryOp cyclic_shift(int k) { return {Kind::CyclicShift, k}; }
    [[nodiscard]] static SymmetryOp reflection() { return {Kind::Reflection, 0}; }
    [[nodiscard]] static SymmetryOp sign_flip() { return {Kind::SignFlip, 0}; }
    [[nodiscard]] static SymmetryOp xy_swap() { return {Kind::XYSwap, 0}; }

    [[nodiscard]] std::string name() const;
};

[[nodiscard]] bool applicable(const SymmetryOp& op, ModelKind kind) noexcept;

/// CyclicShift(k) moves cell i to cell i+k (so (a,b,c) -> (c,a,b) for k=1);
/// on the repressor it rotates (x_i, y_i) pairs together. Reflection maps
/// cell i to cell -i (mod n).
[[nodiscard]] Vector apply_symmetry(const SymmetryOp& op, const ModelSpec& model,
                                    std::span<const double> state);

/// One element of the full symmetry group: reflect, then shift, then the
/// involution (sign flip or x/y swap, depending on the model).
struct GroupElement {
    int shift = 0;
    bool reflect = false;
    bool involution = false;
};

/// All 4n elements of D_n x Z_2 for the model kind.
[[nodiscard]] std::vector<GroupElement> symmetry_group(const ModelSpec& model);
[[nodiscard]] Vector apply_group_element(const GroupElement& g, const ModelSpec& model,
                                         std::span<const double> state);

/// The generators checked by symmetry-closure tests: shift by one, reflection,
/// and the model's involution.
[[nodiscard]] std::vector<SymmetryOp> applicable_generators(ModelKind kind);

}  // namespace ringbif
