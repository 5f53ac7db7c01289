#pragma once

#include "gbtwin/numerics.hpp"

namespace gbtwin {

/// Per-feature min-max scaling fitted on training rows.
struct MinMaxScaler {
    Vector lo;
    Vector hi;

    [[nodiscard]] static MinMaxScaler fit(const Matrix& train);

    /// Maps each column to (x - lo) / (hi - lo); constant columns map to 0.
    [[nodiscard]] Matrix apply(const Matrix& x) const;

    [[nodiscard]] Eigen::Index dims() const noexcept { return lo.size(); }

    friend bool operator==(const MinMaxScaler& a, const MinMaxScaler& b) { return a.lo == b.lo && a.hi == b.hi; }
};

struct NormalizedSplit {
    Matrix train;
    Matrix other;
    MinMaxScaler scaler;
};

/// Fits on `train` and applies the same statistics to `other`.
[[nodiscard]] NormalizedSplit normalize_fit_apply(const Matrix& train, const Matrix& other);

}  // namespace gbtwin
