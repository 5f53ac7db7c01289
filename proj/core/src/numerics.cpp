#include "gbtwin/numerics.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace gbtwin {

namespace {

std::string shape(const Matrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

double clip(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) {
        throw InvalidArgument(std::string(what) + " contains NaN or infinite entries");
    }
}

void require_finite(const Vector& v, std::string_view what) {
    if (!v.allFinite()) {
        throw InvalidArgument(std::string(what) + " contains NaN or infinite entries");
    }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

SpdFactor::SpdFactor(const Matrix& m, double delta) : size_(m.rows()), delta_(delta) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("SPD factorization needs a square matrix, got " + shape(m));
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("regularization delta must be finite and nonnegative");
    }
    require_finite(m, "SPD matrix");
    Matrix shifted = m;
    shifted.diagonal().array() += delta;
    llt_.compute(shifted);
    if (llt_.info() != Eigen::Success) {
        throw NotPositiveDefinite("matrix + " + std::to_string(delta) + " I is not positive definite");
    }
    // LLT accepts tiny positive pivots; reject pivots that vanished in rounding.
    const auto diag = llt_.matrixLLT().diagonal();
    if (size_ > 0 && !(diag.minCoeff() > 0.0)) {
        throw NotPositiveDefinite("Cholesky factor has a nonpositive pivot");
    }
}

Matrix SpdFactor::solve(const Matrix& rhs) const {
    if (rhs.rows() != size_) {
        throw DimensionMismatch("right-hand side has " + std::to_string(rhs.rows()) + " rows, expected " +
                                std::to_string(size_));
    }
    return llt_.solve(rhs);
}

Vector SpdFactor::solve(const Vector& rhs) const {
    if (rhs.size() != size_) {
        throw DimensionMismatch("right-hand side has length " + std::to_string(rhs.size()) + ", expected " +
                                std::to_string(size_));
    }
    return llt_.solve(rhs);
}

Matrix SpdFactor::half_solve(const Matrix& rhs) const {
    if (rhs.rows() != size_) {
        throw DimensionMismatch("right-hand side has " + std::to_string(rhs.rows()) + " rows, expected " +
                                std::to_string(size_));
    }
    return llt_.matrixL().solve(rhs);
}

Matrix solve_spd(const Matrix& m, const Matrix& b, double delta) {
    if (m.rows() != b.rows()) {
        throw DimensionMismatch("solve_spd: " + shape(m) + " system with " + shape(b) + " right-hand side");
    }
    require_finite(b, "right-hand side");
    return SpdFactor(m, delta).solve(b);
}

BoxQp::BoxQp(Matrix hessian, Vector linear, Vector upper)
    : hessian_(std::move(hessian)), linear_(std::move(linear)), upper_(std::move(upper)) {
    const auto n = linear_.size();
    if (hessian_.rows() != n || hessian_.cols() != n || upper_.size() != n) {
        throw DimensionMismatch("box QP: hessian " + shape(hessian_) + ", linear " + std::to_string(n) +
                                ", upper " + std::to_string(upper_.size()));
    }
    require_finite(hessian_, "box QP hessian");
    require_finite(linear_, "box QP linear term");
    require_finite(upper_, "box QP upper bound");
    if (n > 0 && upper_.minCoeff() < 0.0) {
        throw InvalidArgument("box QP upper bounds must be nonnegative");
    }
    const double scale = std::max(1.0, max_abs(hessian_));
    if (n > 0 && (hessian_ - hessian_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw InvalidArgument("box QP hessian is not symmetric");
    }
}

BoxQp::BoxQp(Matrix hessian, Vector linear, Vector upper, Matrix factor)
    : BoxQp(std::move(hessian), std::move(linear), std::move(upper)) {
    if (factor.rows() != size()) {
        throw DimensionMismatch("box QP factor has " + std::to_string(factor.rows()) + " rows, expected " +
                                std::to_string(size()));
    }
    require_finite(factor, "box QP factor");
    const double scale = std::max(1.0, max_abs(hessian_));
    if (size() > 0 && (factor * factor.transpose() - hessian_).cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw InvalidArgument("box QP factor does not reproduce the hessian");
    }
    factor_ = std::move(factor);
}

double BoxQp::objective(const Vector& x) const { return -0.5 * x.dot(hessian_ * x) + linear_.dot(x); }

double BoxQp::kkt_residual(const Vector& x) const {
    const Vector g = linear_ - hessian_ * x;
    double r = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        r = std::max(r, std::abs(x[i] - clip(x[i] + g[i], 0.0, upper_[i])));
    }
    return r;
}

namespace {

double residual_from_gradient(const Vector& x, const Vector& g, const Vector& upper) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        r = std::max(r, std::abs(x[i] - clip(x[i] + g[i], 0.0, upper[i])));
    }
    return r;
}

// Gradient bookkeeping with M held densely: g = c - Mx is kept up to date.
class DenseState {
  public:
    DenseState(const Matrix& m, const Vector& c) : m_(m), c_(c), g_(c) {}

    [[nodiscard]] double diag(Eigen::Index i) const { return m_(i, i); }
    [[nodiscard]] double grad(Eigen::Index i) const { return g_[i]; }
    void move(Eigen::Index i, double dx) { g_.noalias() -= m_.col(i) * dx; }
    void refresh(const Vector& x) { g_ = c_ - m_ * x; }
    [[nodiscard]] Vector gradient() const { return g_; }
    [[nodiscard]] double cross(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  private:
    const Matrix& m_;
    const Vector& c_;
    Vector g_;
};

// Gradient bookkeeping with M = UU': only w = U'x is kept, so a coordinate
// update costs O(rank) instead of O(n).
class LowRankState {
  public:
    LowRankState(const Matrix& u, const Vector& c)
        : u_(u), c_(c), w_(Vector::Zero(u.cols())), diag_(u.rowwise().squaredNorm()) {}

    [[nodiscard]] double diag(Eigen::Index i) const { return diag_[i]; }
    [[nodiscard]] double grad(Eigen::Index i) const { return c_[i] - u_.row(i).dot(w_); }
    void move(Eigen::Index i, double dx) { w_.noalias() += u_.row(i).transpose() * dx; }
    void refresh(const Vector& x) { w_.noalias() = u_.transpose() * x; }
    [[nodiscard]] Vector gradient() const { return c_ - u_ * w_; }
    [[nodiscard]] double cross(Eigen::Index i, Eigen::Index j) const { return u_.row(i).dot(u_.row(j)); }

  private:
    const Matrix& u_;
    const Vector& c_;
    Vector w_;
    Vector diag_;
};

// Primal active-set phase started from the current iterate. Coordinates at a
// bound form the working set; on the remaining face the step is the
// minimum-norm Newton step to the face maximizer, or, when the gradient has a
// component in the null space of M_ff, that component (the objective is
// linear along it). A ratio test stops the step at the first bound hit, which
// then joins the working set. At a face maximizer the bound with the largest
// KKT violation is released. Each accepted step raises the objective.
template <class State>
void active_set_phase(State& state, const Vector& upper, Vector& x, double tol, std::size_t max_steps) {
    const Eigen::Index n = x.size();
    std::vector<char> fixed(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        fixed[static_cast<std::size_t>(i)] = x[i] <= 0.0 || x[i] >= upper[i];
    }
    Eigen::Index last_released = -1;
    std::vector<Eigen::Index> free;
    for (std::size_t step = 0; step < max_steps; ++step) {
        free.clear();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!fixed[static_cast<std::size_t>(i)]) {
                free.push_back(i);
            }
        }
        const auto k = static_cast<Eigen::Index>(free.size());
        bool at_face_max = true;
        if (k > 0) {
            Matrix m_ff(k, k);
            Vector g_f(k);
            for (Eigen::Index a = 0; a < k; ++a) {
                g_f[a] = state.grad(free[a]);
                for (Eigen::Index b = 0; b <= a; ++b) {
                    m_ff(a, b) = m_ff(b, a) = state.cross(free[a], free[b]);
                }
            }
            Eigen::CompleteOrthogonalDecomposition<Matrix> cod(m_ff);
            cod.setThreshold(1e-13);
            const Vector newton = cod.solve(g_f);
            if (!newton.allFinite()) {
                return;
            }
            const Vector null_part = g_f - m_ff * newton;
            const double g_scale = std::max(1.0, g_f.cwiseAbs().maxCoeff());
            const bool unbounded = null_part.cwiseAbs().maxCoeff() > 1e-11 * g_scale;
            const Vector& dir = unbounded ? null_part : newton;
            if (g_f.dot(dir) > 0.0 && dir.cwiseAbs().maxCoeff() > 0.0) {
                double alpha = unbounded ? std::numeric_limits<double>::infinity() : 1.0;
                Eigen::Index block = -1;
                for (Eigen::Index a = 0; a < k; ++a) {
                    const Eigen::Index i = free[a];
                    double t = std::numeric_limits<double>::infinity();
                    if (dir[a] > 0.0) {
                        t = (upper[i] - x[i]) / dir[a];
                    } else if (dir[a] < 0.0) {
                        t = -x[i] / dir[a];
                    }
                    if (t < alpha) {
                        alpha = t;
                        block = a;
                    }
                }
                if (!std::isfinite(alpha)) {
                    return;
                }
                if (block >= 0 && alpha <= 0.0 && free[block] == last_released) {
                    return;  // released bound blocks at once; leave it to the sweeps
                }
                for (Eigen::Index a = 0; a < k; ++a) {
                    const Eigen::Index i = free[a];
                    double nx = clip(x[i] + alpha * dir[a], 0.0, upper[i]);
                    if (a == block) {
                        nx = dir[a] > 0.0 ? upper[i] : 0.0;
                    }
                    if (nx != x[i]) {
                        state.move(i, nx - x[i]);
                        x[i] = nx;
                    }
                }
                if (block >= 0) {
                    fixed[static_cast<std::size_t>(free[block])] = 1;
                    at_face_max = false;
                }
            }
        }
        if (!at_face_max) {
            continue;
        }
        state.refresh(x);
        double worst = 0.5 * tol;
        Eigen::Index release = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!fixed[static_cast<std::size_t>(i)]) {
                continue;
            }
            const double gi = state.grad(i);
            const double violation = std::abs(x[i] - clip(x[i] + gi, 0.0, upper[i]));
            if (violation > worst) {
                worst = violation;
                release = i;
            }
        }
        if (release < 0) {
            return;
        }
        fixed[static_cast<std::size_t>(release)] = 0;
        last_released = release;
    }
}

template <class State>
DualSolution coordinate_ascent(const BoxQp& problem, State state, double tol, std::size_t max_sweeps) {
    const Vector& c = problem.linear();
    const Vector& upper = problem.upper();
    const Eigen::Index n = problem.size();

    DualSolution sol;
    sol.x = Vector::Zero(n);
    if (n == 0) {
        return sol;
    }
    Vector& x = sol.x;
    std::size_t next_phase = 1;  // active-set phases run after sweeps 1, 2, 4, 8, ...

    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mii = state.diag(i);
            const double gi = state.grad(i);
            double nx;
            if (mii > 0.0) {
                nx = clip(x[i] + gi / mii, 0.0, upper[i]);
            } else if (gi > 0.0) {
                nx = upper[i];
            } else if (gi < 0.0) {
                nx = 0.0;
            } else {
                nx = x[i];
            }
            const double dx = nx - x[i];
            if (dx != 0.0) {
                x[i] = nx;
                state.move(i, dx);
            }
        }
        if (sweep % 64 == 0) {
            state.refresh(x);
        }

        Vector g = state.gradient();
        double residual = residual_from_gradient(x, g, upper);
        if (residual > tol && sweep == next_phase) {
            next_phase *= 2;
            active_set_phase(state, upper, x, tol, 4 * static_cast<std::size_t>(n) + 20);
            state.refresh(x);
            g = state.gradient();
            residual = residual_from_gradient(x, g, upper);
        }

        // x'(c + g) / 2 equals c'x - x'Mx / 2.
        sol.objective_trace.push_back(0.5 * x.dot(c + g));
        sol.iterations = sweep;

        if (residual <= tol) {
            sol.kkt_residual = problem.kkt_residual(x);
            if (sol.kkt_residual <= tol) {
                sol.objective = problem.objective(x);
                return sol;
            }
            state.refresh(x);
        }
    }
    sol.kkt_residual = problem.kkt_residual(x);
    sol.objective = problem.objective(x);
    if (sol.kkt_residual <= tol) {
        return sol;
    }
    throw DidNotConverge("box QP did not reach tolerance " + std::to_string(tol) + " within " +
                             std::to_string(max_sweeps) + " sweeps (residual " + std::to_string(sol.kkt_residual) +
                             ")",
                         std::move(sol));
}

}  // namespace

DualSolution solve_box_qp(const BoxQp& problem, double tol, std::size_t max_sweeps) {
    if (!(tol > 0.0)) {
        throw InvalidArgument("box QP tolerance must be positive");
    }
    const auto n = static_cast<std::size_t>(problem.size());
    if (max_sweeps == 0) {
        max_sweeps = std::max<std::size_t>(50, 10 * n * n);
    }
    if (problem.factor() && problem.factor()->cols() < problem.size()) {
        return coordinate_ascent(problem, LowRankState(*problem.factor(), problem.linear()), tol, max_sweeps);
    }
    return coordinate_ascent(problem, DenseState(problem.hessian(), problem.linear()), tol, max_sweeps);
}

}  // namespace gbtwin
