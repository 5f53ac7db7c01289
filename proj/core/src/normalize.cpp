#include "gbtwin/normalize.hpp"

#include <string>

namespace gbtwin {

MinMaxScaler MinMaxScaler::fit(const Matrix& train) {
    if (train.rows() == 0) {
        throw EmptyInput("cannot fit a scaler on zero rows");
    }
    require_finite(train, "training features");
    return {train.colwise().minCoeff().transpose(), train.colwise().maxCoeff().transpose()};
}

Matrix MinMaxScaler::apply(const Matrix& x) const {
    if (x.rows() == 0) {
        return Matrix(0, lo.size());
    }
    if (x.cols() != lo.size()) {
        throw DimensionMismatch("scaler fitted on " + std::to_string(lo.size()) + " features, got " +
                                std::to_string(x.cols()));
    }
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double span = hi[j] - lo[j];
        if (span > 0.0) {
            out.col(j) = (x.col(j).array() - lo[j]) / span;
        } else {
            out.col(j).setZero();
        }
    }
    return out;
}

NormalizedSplit normalize_fit_apply(const Matrix& train, const Matrix& other) {
    NormalizedSplit out;
    out.scaler = MinMaxScaler::fit(train);
    out.train = out.scaler.apply(train);
    out.other = out.scaler.apply(other);
    return out;
}

}  // namespace gbtwin
