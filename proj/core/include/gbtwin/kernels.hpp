#pragma once

#include "gbtwin/numerics.hpp"

#include <string>
#include <string_view>

namespace gbtwin {

enum class KernelKind { linear, gaussian };

/// Kernel choice; `p` is the Gaussian width, k(x, y) = exp(-|x - y|^2 / p^2).
struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double p = 1.0;

    [[nodiscard]] static KernelSpec linear() { return {}; }
    [[nodiscard]] static KernelSpec gaussian(double width) { return {KernelKind::gaussian, width}; }

    void validate() const;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

[[nodiscard]] std::string to_string(KernelKind kind);
[[nodiscard]] KernelKind parse_kernel_kind(std::string_view name);

[[nodiscard]] double kernel_value(const KernelSpec& spec, const Eigen::Ref<const Vector>& x,
                                  const Eigen::Ref<const Vector>& y);

/// Entry (i, j) is k(row i of x, row j of y).
[[nodiscard]] Matrix gram(const Matrix& x, const Matrix& y, const KernelSpec& spec);

}  // namespace gbtwin
