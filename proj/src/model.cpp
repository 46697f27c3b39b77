#include "germ/model.hpp"

#include <cmath>

namespace germ {

void Dims::validate() const {
    if (n < 1 || q < 0 || m < 0) {
        throw Error(ErrorKind::DimensionMismatch,
                    "invalid dims: need n >= 1, q >= 0, m >= 0 (got q=" + std::to_string(q) +
                        ", m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
    }
}

BlockJacobian::BlockJacobian(Matrix full, Dims dims) : full_(std::move(full)), dims_(dims) {
    dims_.validate();
    if (full_.rows() != dims_.n || full_.cols() != dims_.total()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "Jacobian shape " + std::to_string(full_.rows()) + "x" +
                        std::to_string(full_.cols()) + " does not match dims n=" +
                        std::to_string(dims_.n) + ", p+n=" + std::to_string(dims_.total()));
    }
    lu_ = std::make_shared<const LuFactorization>(d_y().to_matrix());
}

Vec eval_f(const FunctionSpec& spec, const Vec& point) {
    spec.dims.validate();
    if (static_cast<int>(point.size()) != spec.dims.total()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "point length " + std::to_string(point.size()) + " does not match p+n=" +
                        std::to_string(spec.dims.total()));
    }
    Vec out = spec.evaluator(point);
    if (static_cast<int>(out.size()) != spec.dims.n) {
        throw Error(ErrorKind::DimensionMismatch,
                    "evaluator returned " + std::to_string(out.size()) + " values, expected n=" +
                        std::to_string(spec.dims.n));
    }
    return out;
}

BlockJacobian partition_jacobian(Matrix full, const Dims& dims) {
    return BlockJacobian(std::move(full), dims);
}

BlockJacobian fd_jacobian(const FunctionSpec& spec, const Vec& point, double h0) {
    spec.dims.validate();
    const int n = spec.dims.n;
    const int width = spec.dims.total();
    if (static_cast<int>(point.size()) != width) {
        throw Error(ErrorKind::DimensionMismatch, "fd_jacobian point length mismatch");
    }
    Matrix jac(n, width);
    Vec probe = point;
    for (int j = 0; j < width; ++j) {
        const double h = h0 * std::max(1.0, std::abs(point[j]));
        probe[j] = point[j] + h;
        Vec plus = eval_f(spec, probe);
        probe[j] = point[j] - h;
        Vec minus = eval_f(spec, probe);
        probe[j] = point[j];
        const double inv_2h = 1.0 / (2.0 * h);
        for (int i = 0; i < n; ++i) jac(i, j) = (plus[i] - minus[i]) * inv_2h;
    }
    return BlockJacobian(std::move(jac), spec.dims);
}

BlockJacobian jacobian_of(const FunctionSpec& spec, const Vec& point, double h0) {
    if (spec.analytic_jacobian) {
        return BlockJacobian(spec.analytic_jacobian(point), spec.dims);
    }
    return fd_jacobian(spec, point, h0);
}

SeedPoint check_seed(const FunctionSpec& spec, const Vec& a, const Vec& b, const Vec& c,
                     double tol) {
    if (tol <= 0.0) {
        throw Error(ErrorKind::ConfigError, "seed tolerance must be positive");
    }
    if (static_cast<int>(a.size()) != spec.dims.p() || static_cast<int>(b.size()) != spec.dims.n ||
        static_cast<int>(c.size()) != spec.dims.n) {
        throw Error(ErrorKind::DimensionMismatch, "seed component lengths do not match dims");
    }
    Vec value = eval_f(spec, vec_concat(a, b));
    const double residual = inf_norm(vec_sub(value, c));
    if (!(residual <= tol)) {  // NaN also rejects
        throw Error(ErrorKind::SeedResidualTooLarge,
                    "seed residual " + std::to_string(residual) + " exceeds tolerance " +
                        std::to_string(tol))
            .with_value(residual);
    }
    return SeedPoint{a, b, c, residual};
}

}  // namespace germ
