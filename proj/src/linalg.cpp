#include "germ/linalg.hpp"

#include <cmath>
#include <cstdlib>

namespace germ {

double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::DimensionMismatch, "vector size mismatch in subtraction");
    }
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vec vec_concat(const Vec& a, const Vec& b) {
    Vec out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix MatrixView::to_matrix() const {
    Matrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    return out;
}

double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "matmul shape mismatch");
    }
    Matrix out(a.rows(), b.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Vec matvec(const Matrix& a, const Vec& v) {
    if (a.cols() != static_cast<int>(v.size())) {
        throw Error(ErrorKind::DimensionMismatch, "matvec shape mismatch");
    }
    Vec out(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

LuFactorization::LuFactorization(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "LU requires a square matrix");
    }
    const int n = a.rows();
    lu_ = a;
    piv_.resize(n);
    for (int i = 0; i < n; ++i) piv_[i] = i;

    const double norm_a = inf_norm(a);
    int sign = 1;
    valid_ = true;

    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double pivot_mag = std::abs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double mag = std::abs(lu_(i, k));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if (pivot_mag == 0.0) {
            valid_ = false;
            break;
        }
        if (pivot_row != k) {
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot_row, j));
            std::swap(piv_[k], piv_[pivot_row]);
            sign = -sign;
        }
        const double inv_pivot = 1.0 / lu_(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double factor = lu_(i, k) * inv_pivot;
            lu_(i, k) = factor;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
        }
    }

    if (!valid_) {
        det_ = 0.0;
        rcond_ = 0.0;
        return;
    }

    det_ = sign;
    for (int k = 0; k < n; ++k) det_ *= lu_(k, k);

    if (n == 1) {
        rcond_ = 1.0;  // any nonzero scalar is perfectly conditioned
        return;
    }

    // ‖A⁻¹‖∞ from n solves against unit vectors; fine at these sizes.
    Matrix inv = solve(Matrix::identity(n));
    const double norm_inv = inf_norm(inv);
    rcond_ = (norm_a > 0.0 && norm_inv > 0.0) ? 1.0 / (norm_a * norm_inv) : 0.0;
    if (!std::isfinite(rcond_)) rcond_ = 0.0;
}

Vec LuFactorization::solve(const Vec& rhs) const {
    if (!valid_) {
        throw Error(ErrorKind::SingularJacobian, "solve on a singular factorization");
    }
    const int n = size();
    if (static_cast<int>(rhs.size()) != n) {
        throw Error(ErrorKind::DimensionMismatch, "LU solve rhs size mismatch");
    }
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rhs[piv_[i]];
    for (int i = 1; i < n; ++i) {
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Matrix LuFactorization::solve(const Matrix& rhs) const {
    const int n = size();
    if (rhs.rows() != n) {
        throw Error(ErrorKind::DimensionMismatch, "LU solve rhs rows mismatch");
    }
    Matrix out(n, rhs.cols());
    Vec col(n);
    for (int j = 0; j < rhs.cols(); ++j) {
        for (int i = 0; i < n; ++i) col[i] = rhs(i, j);
        Vec x = solve(col);
        for (int i = 0; i < n; ++i) out(i, j) = x[i];
    }
    return out;
}

Matrix LuFactorization::lower() const {
    const int n = size();
    Matrix l = Matrix::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) l(i, j) = lu_(i, j);
    return l;
}

Matrix LuFactorization::upper() const {
    const int n = size();
    Matrix u(n, n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) u(i, j) = lu_(i, j);
    return u;
}

}  // namespace germ
