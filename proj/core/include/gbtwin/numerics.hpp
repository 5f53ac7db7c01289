#pragma once

#include "gbtwin/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace gbtwin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws InvalidArgument if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);
void require_finite(const Vector& v, std::string_view what);

/// Largest absolute entry; 0 for an empty matrix.
[[nodiscard]] double max_abs(const Matrix& m);

/**
 * Cholesky factor of (M + delta I) for a symmetric M.
 *
 * Kept around by the twin-plane trainer so that the factorization done while
 * assembling a dual problem is reused when the plane is recovered.
 */
class SpdFactor {
  public:
    SpdFactor() = default;
    SpdFactor(const Matrix& m, double delta);

    [[nodiscard]] Matrix solve(const Matrix& rhs) const;
    [[nodiscard]] Vector solve(const Vector& rhs) const;
    /// L^-1 rhs for the Cholesky factor L, so that solve(b) = L^-T L^-1 b.
    [[nodiscard]] Matrix half_solve(const Matrix& rhs) const;

    [[nodiscard]] Eigen::Index size() const noexcept { return size_; }
    [[nodiscard]] double delta() const noexcept { return delta_; }

  private:
    Eigen::LLT<Matrix> llt_;
    Eigen::Index size_ = 0;
    double delta_ = 0.0;
};

/// Solves (M + delta I) X = B.
[[nodiscard]] Matrix solve_spd(const Matrix& m, const Matrix& b, double delta);

/**
 * maximize  -1/2 x'Mx + c'x   subject to  0 <= x <= upper.
 */
class BoxQp {
  public:
    BoxQp(Matrix hessian, Vector linear, Vector upper);
    /// Also records a factor with hessian = factor * factor'. The solver uses
    /// it when it has fewer columns than rows.
    BoxQp(Matrix hessian, Vector linear, Vector upper, Matrix factor);

    [[nodiscard]] const Matrix& hessian() const noexcept { return hessian_; }
    [[nodiscard]] const Vector& linear() const noexcept { return linear_; }
    [[nodiscard]] const Vector& upper() const noexcept { return upper_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return linear_.size(); }
    [[nodiscard]] const std::optional<Matrix>& factor() const noexcept { return factor_; }

    [[nodiscard]] double objective(const Vector& x) const;
    /// max_i |x_i - clip(x_i + g_i, 0, upper_i)| with g = c - Mx.
    [[nodiscard]] double kkt_residual(const Vector& x) const;

  private:
    Matrix hessian_;
    Vector linear_;
    Vector upper_;
    std::optional<Matrix> factor_;
};

struct DualSolution {
    Vector x;
    double kkt_residual = 0.0;
    std::size_t iterations = 0;  ///< coordinate sweeps performed
    double objective = 0.0;
    std::vector<double> objective_trace;  ///< objective after each sweep
};

/// Raised when the sweep budget runs out; carries the best iterate found.
class DidNotConverge : public Error {
  public:
    DidNotConverge(const std::string& what, DualSolution best) : Error(what), best_(std::move(best)) {}

    [[nodiscard]] const DualSolution& best() const noexcept { return best_; }

  private:
    DualSolution best_;
};

inline constexpr double default_qp_tolerance = 1e-8;

/**
 * Projected cyclic coordinate descent with exact line minimization per
 * coordinate. Each coordinate update is the closed-form maximizer of the
 * objective along that axis, clipped to the box, so the objective never
 * decreases. After sweeps 1, 2, 4, 8, ... a primal active-set phase takes
 * Newton steps on the face of coordinates strictly inside the box; it is
 * ascent-only as well and settles the ill-conditioned cases the sweeps crawl on.
 *
 * @param max_sweeps zero selects the default budget of max(50, 10 n^2) sweeps.
 */
[[nodiscard]] DualSolution solve_box_qp(const BoxQp& problem, double tol = default_qp_tolerance,
                                        std::size_t max_sweeps = 0);

}  // namespace gbtwin
