#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "germ/linalg.hpp"

namespace germ {

/// Smoothness order used when no finite bound is declared.
inline constexpr int kSmoothnessInf = std::numeric_limits<int>::max();

/// Variable partition sizes. The x-block of size p = q + m splits into
/// q s-variables (continuity only) and m t-variables (differentiable);
/// n is the number of solved y-variables. p = 0 is the inverse-function
/// case.
struct Dims {
    int q = 0;
    int m = 0;
    int n = 1;

    int p() const noexcept { return q + m; }
    int total() const noexcept { return q + m + n; }

    void validate() const;
    bool operator==(const Dims&) const = default;
};

/// An evaluatable map F : ℝ^(p+n) → ℝ^n with optional analytic Jacobian.
/// The working domain is implicit: the evaluator signals DomainError
/// where F is undefined. `smoothness` is the C^r order in the (t, y)
/// variables; `differentiable_in_s` false marks the mixed case where the
/// s-columns of the Jacobian carry no meaning.
struct FunctionSpec {
    Dims dims;
    std::function<Vec(const Vec&)> evaluator;
    std::function<Matrix(const Vec&)> analytic_jacobian;  // n × (p+n), optional
    int smoothness = kSmoothnessInf;
    bool differentiable_in_s = true;
    std::string name;
};

/// A certified root: ‖F(a, b) − c‖∞ ≤ the tolerance it was checked at.
struct SeedPoint {
    Vec a;  // x-part, s-variables then t-variables (length p)
    Vec b;  // y-part (length n)
    Vec c;  // target value (length n)
    double residual_inf = 0.0;
};

/// Full Jacobian of F at a point together with its column partition and
/// an eagerly computed pivoted LU of the y-block.
class BlockJacobian {
public:
    BlockJacobian(Matrix full, Dims dims);

    const Matrix& full() const noexcept { return full_; }
    const Dims& dims() const noexcept { return dims_; }

    MatrixView d_s() const { return {&full_, 0, 0, dims_.n, dims_.q}; }
    MatrixView d_t() const { return {&full_, 0, dims_.q, dims_.n, dims_.m}; }
    MatrixView d_x() const { return {&full_, 0, 0, dims_.n, dims_.p()}; }
    MatrixView d_y() const { return {&full_, 0, dims_.p(), dims_.n, dims_.n}; }

    const LuFactorization& d_y_lu() const noexcept { return *lu_; }
    double d_y_rcond() const noexcept { return lu_->rcond(); }
    double d_y_det() const noexcept { return lu_->det(); }

private:
    Matrix full_;
    Dims dims_;
    std::shared_ptr<const LuFactorization> lu_;
};

/// Evaluate F with dimension checks; coordinate functions in order.
Vec eval_f(const FunctionSpec& spec, const Vec& point);

/// Slice a full n×(p+n) Jacobian by the partition and factor the y-block.
BlockJacobian partition_jacobian(Matrix full, const Dims& dims);

/// Central-difference Jacobian with per-coordinate step
/// h_i = h0 · max(1, |point_i|).
BlockJacobian fd_jacobian(const FunctionSpec& spec, const Vec& point, double h0 = 1e-6);

/// Analytic Jacobian when the spec provides one, finite differences
/// otherwise.
BlockJacobian jacobian_of(const FunctionSpec& spec, const Vec& point, double h0 = 1e-6);

/// Certify F(a, b) = c to the given ∞-norm tolerance.
SeedPoint check_seed(const FunctionSpec& spec, const Vec& a, const Vec& b, const Vec& c,
                     double tol = 1e-10);

}  // namespace germ
