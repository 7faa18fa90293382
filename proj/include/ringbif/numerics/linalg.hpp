#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ringbif {

using Vector = std::vector<double>;

class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix for the small systems used here (dimension <= 64).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] static Matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    void resize(std::size_t rows, std::size_t cols, double fill = 0.0) {
        rows_ = rows;
        cols_ = cols;
        data_.assign(rows * cols, fill);
    }
    void fill(double value) noexcept { std::fill(data_.begin(), data_.end(), value); }

    /// Maximum absolute row sum.
    [[nodiscard]] double norm_inf() const noexcept;
    [[nodiscard]] Matrix transposed() const;
    [[nodiscard]] bool is_symmetric() const noexcept;

    [[nodiscard]] Vector operator*(std::span<const double> x) const;
    [[nodiscard]] Matrix operator*(const Matrix& other) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-13 * ||A||_inf.
[[nodiscard]] Vector solve_linear(Matrix A, std::span<const double> b);

}  // namespace ringbif
