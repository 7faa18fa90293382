#pragma once

#include <complex>
#include <vector>

#include "ringbif/numerics/linalg.hpp"

namespace ringbif {

/// Eigenvalues sorted by descending real part, ties broken by descending
/// imaginary part.
struct Spectrum {
    std::vector<std::complex<double>> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double leading_real() const;
    /// Eigenvalue whose real part is closest to zero.
    [[nodiscard]] std::complex<double> critical() const;
    [[nodiscard]] int count_positive_real(double eps = 0.0) const noexcept;

    void sort();
};

/// All eigenvalues of a square matrix. Symmetric inputs go through cyclic
/// Jacobi and come back exactly real; everything else is reduced to upper
/// Hessenberg form and iterated with Francis double-shift QR.
///
/// Throws NumericalFailure if QR does not converge within its iteration cap.
[[nodiscard]] Spectrum eigenvalues(const Matrix& A);

struct SymmetricEigen {
    Vector values;   // ascending
    Matrix vectors;  // column j pairs with values[j]
};

/// Cyclic Jacobi rotations; `A` must be symmetric.
[[nodiscard]] SymmetricEigen symmetric_eigen(const Matrix& A);

/// Orthonormal basis of the numerical null space of A: right singular vectors
/// with singular value <= tol. At least one vector is always returned (the
/// one for the smallest singular value).
[[nodiscard]] std::vector<Vector> kernel_basis(const Matrix& A, double tol);

/// Multiset distance between two spectra: greedy matching after sorting,
/// returns the largest absolute mismatch.
[[nodiscard]] double spectrum_distance(const Spectrum& a, const Spectrum& b);

}  // namespace ringbif
