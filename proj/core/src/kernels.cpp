#include "gbtwin/kernels.hpp"

#include <cmath>

namespace gbtwin {

void KernelSpec::validate() const {
    if (kind == KernelKind::gaussian && !(p > 0.0 && std::isfinite(p))) {
        throw InvalidArgument("Gaussian kernel width p must be positive");
    }
}

std::string to_string(KernelKind kind) { return kind == KernelKind::linear ? "linear" : "gaussian"; }

KernelKind parse_kernel_kind(std::string_view name) {
    if (name == "linear") {
        return KernelKind::linear;
    }
    if (name == "gaussian" || name == "rbf") {
        return KernelKind::gaussian;
    }
    throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
}

double kernel_value(const KernelSpec& spec, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("kernel arguments have different lengths");
    }
    if (spec.kind == KernelKind::linear) {
        return x.dot(y);
    }
    return std::exp(-(x - y).squaredNorm() / (spec.p * spec.p));
}

Matrix gram(const Matrix& x, const Matrix& y, const KernelSpec& spec) {
    if (x.cols() != y.cols()) {
        throw DimensionMismatch("gram: " + std::to_string(x.cols()) + " vs " + std::to_string(y.cols()) +
                                " feature columns");
    }
    spec.validate();
    if (spec.kind == KernelKind::linear) {
        return x * y.transpose();
    }
    // |x - y|^2 expanded would lose the exact zero on the diagonal; compute directly.
    const double inv = 1.0 / (spec.p * spec.p);
    Matrix k(x.rows(), y.rows());
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            k(i, j) = std::exp(-(x.row(i) - y.row(j)).squaredNorm() * inv);
        }
    }
    return k;
}

}  // namespace gbtwin
