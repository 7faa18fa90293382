#include "ringbif/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ringbif {

Matrix Matrix::identity(std::size_t n) {
    Matrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

double Matrix::norm_inf() const noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (double v : row(i)) s += std::abs(v);
        best = std::max(best, s);
    }
    return best;
}

Matrix Matrix::transposed() const {
    Matrix T(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    return T;
}

bool Matrix::is_symmetric() const noexcept {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

Vector Matrix::operator*(std::span<const double> x) const {
    if (x.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        const auto r = row(i);
        for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix-matrix dimension mismatch");
    Matrix C(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) C(i, j) += a * other(k, j);
        }
    return C;
}

Vector solve_linear(Matrix A, std::span<const double> b) {
    if (!A.square() || A.rows() != b.size()) {
        throw std::invalid_argument("solve_linear: A must be square and match b");
    }
    const std::size_t n = A.rows();
    const double threshold = 1e-13 * A.norm_inf();
    Vector x(b.begin(), b.end());

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(A(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(A(i, k)) > best) {
                best = std::abs(A(i, k));
                piv = i;
            }
        }
        if (!(best > threshold)) {
            throw SingularMatrix("singular matrix: pivot " + std::to_string(best) + " at column " +
                                 std::to_string(k));
        }
        if (piv != k) {
            std::swap_ranges(A.row(k).begin(), A.row(k).end(), A.row(piv).begin());
            std::swap(x[k], x[piv]);
        }
        const double inv = 1.0 / A(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A(i, k) * inv;
            if (f == 0.0) continue;
            A(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
            x[i] -= f * x[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = x[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A(k, j) * x[j];
        x[k] = s / A(k, k);
    }
    return x;
}

}  // namespace ringbif
