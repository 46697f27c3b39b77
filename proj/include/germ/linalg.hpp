#pragma once

#include <span>
#include <vector>

#include "germ/error.hpp"

namespace germ {

using Vec = std::vector<double>;

/// Max-abs (∞) norm of a vector; 0 for the empty vector.
double inf_norm(const Vec& v);

Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_concat(const Vec& a, const Vec& b);

/// Dense row-major matrix. Sized for the small systems this library
/// works with; no attempt at blocking or expression templates.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Zero-copy rectangular window into a Matrix owned elsewhere.
class MatrixView {
public:
    MatrixView() = default;
    MatrixView(const Matrix* src, int row0, int col0, int rows, int cols)
        : src_(src), row0_(row0), col0_(col0), rows_(rows), cols_(cols) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    double operator()(int i, int j) const { return (*src_)(row0_ + i, col0_ + j); }

    /// Materialize the window into its own storage.
    Matrix to_matrix() const;

private:
    const Matrix* src_ = nullptr;
    int row0_ = 0, col0_ = 0, rows_ = 0, cols_ = 0;
};

double inf_norm(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
Vec matvec(const Matrix& a, const Vec& v);

/// LU factorization with partial (row) pivoting.
///
/// rcond is 1 / (‖A‖∞ · ‖A⁻¹‖∞), computed directly from the factors;
/// a nonsingular 1×1 matrix has rcond exactly 1. A zero pivot marks the
/// factorization invalid and forces rcond = 0.
class LuFactorization {
public:
    explicit LuFactorization(const Matrix& a);

    bool valid() const noexcept { return valid_; }
    double rcond() const noexcept { return rcond_; }
    double det() const noexcept { return det_; }
    int size() const noexcept { return lu_.rows(); }

    /// Solve A x = rhs via the stored factors. Requires valid().
    Vec solve(const Vec& rhs) const;
    Matrix solve(const Matrix& rhs) const;

    /// Row permutation: row i of P·A is row pivots()[i] of A.
    const std::vector<int>& pivots() const noexcept { return piv_; }
    Matrix lower() const;
    Matrix upper() const;

private:
    Matrix lu_;             // combined L (unit diagonal, below) and U (on/above)
    std::vector<int> piv_;
    bool valid_ = false;
    double rcond_ = 0.0;
    double det_ = 0.0;
};

}  // namespace germ
