#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gbtwin::testing {

std::optional<Vector> gauss_solve(Matrix a, Vector b) {
    const Eigen::Index n = a.rows();
    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            scale = std::max(scale, std::abs(a(i, j)));
        }
    }
    if (scale == 0.0) {
        return n == 0 ? std::optional<Vector>(Vector(0)) : std::nullopt;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = k;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) {
                piv = i;
            }
        }
        if (std::abs(a(piv, k)) < 1e-12 * scale) {
            return std::nullopt;
        }
        if (piv != k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
            }
            std::swap(b[k], b[piv]);
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (Eigen::Index j = k; j < n; ++j) {
                a(i, j) -= f * a(k, j);
            }
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (Eigen::Index j = i + 1; j < n; ++j) {
            s -= a(i, j) * x[j];
        }
        x[i] = s / a(i, i);
    }
    return x;
}

Matrix gauss_jordan_inverse(Matrix a) {
    const Eigen::Index n = a.rows();
    Matrix inv = Matrix::Identity(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = k;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) {
                piv = i;
            }
        }
        if (a(piv, k) == 0.0) {
            throw std::runtime_error("singular matrix");
        }
        a.row(k).swap(a.row(piv));
        inv.row(k).swap(inv.row(piv));
        const double p = a(k, k);
        for (Eigen::Index j = 0; j < n; ++j) {
            a(k, j) /= p;
            inv(k, j) /= p;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == k) {
                continue;
            }
            const double f = a(i, k);
            for (Eigen::Index j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

double qp_objective(const Matrix& m, const Vector& c, const Vector& x) {
    double quad = 0.0;
    double lin = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        lin += c[i] * x[i];
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            quad += x[i] * m(i, j) * x[j];
        }
    }
    return lin - 0.5 * quad;
}

double qp_residual(const Matrix& m, const Vector& c, const Vector& upper, const Vector& x) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double g = c[i];
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            g -= m(i, j) * x[j];
        }
        const double moved = std::clamp(x[i] + g, 0.0, upper[i]);
        worst = std::max(worst, std::abs(x[i] - moved));
    }
    return worst;
}

OracleQp enumerate_box_qp(const Matrix& m, const Vector& c, const Vector& upper) {
    const Eigen::Index n = c.size();
    std::size_t patterns = 1;
    for (Eigen::Index i = 0; i < n; ++i) {
        patterns *= 3;
    }
    OracleQp best;
    best.objective = -std::numeric_limits<double>::infinity();
    std::vector<int> state(static_cast<std::size_t>(n));
    for (std::size_t code = 0; code < patterns; ++code) {
        std::size_t rest = code;
        std::vector<Eigen::Index> free;
        Vector x = Vector::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            state[static_cast<std::size_t>(i)] = static_cast<int>(rest % 3);
            rest /= 3;
            if (state[static_cast<std::size_t>(i)] == 1) {
                x[i] = upper[i];
            } else if (state[static_cast<std::size_t>(i)] == 2) {
                free.push_back(i);
            }
        }
        const auto k = static_cast<Eigen::Index>(free.size());
        if (k > 0) {
            Matrix a(k, k);
            Vector rhs(k);
            for (Eigen::Index r = 0; r < k; ++r) {
                double s = c[free[r]];
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (state[static_cast<std::size_t>(j)] == 1) {
                        s -= m(free[r], j) * upper[j];
                    }
                }
                rhs[r] = s;
                for (Eigen::Index q = 0; q < k; ++q) {
                    a(r, q) = m(free[r], free[q]);
                }
            }
            const auto sol = gauss_solve(a, rhs);
            if (!sol) {
                continue;
            }
            bool inside = true;
            for (Eigen::Index r = 0; r < k; ++r) {
                const double v = (*sol)[r];
                const double slack = 1e-12 * std::max(1.0, upper[free[r]]);
                if (v < -slack || v > upper[free[r]] + slack) {
                    inside = false;
                    break;
                }
                x[free[r]] = std::clamp(v, 0.0, upper[free[r]]);
            }
            if (!inside) {
                continue;
            }
        }
        ++best.candidates;
        const double obj = qp_objective(m, c, x);
        if (obj > best.objective) {
            best.objective = obj;
            best.x = x;
        }
    }
    return best;
}

namespace {

Matrix with_ones(const Matrix& x) {
    Matrix out(x.rows(), x.cols() + 1);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out(i, j) = x(i, j);
        }
        out(i, x.cols()) = 1.0;
    }
    return out;
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
    Matrix out(top.rows() + bottom.rows(), top.cols());
    for (Eigen::Index i = 0; i < top.rows(); ++i) {
        out.row(i) = top.row(i);
    }
    for (Eigen::Index i = 0; i < bottom.rows(); ++i) {
        out.row(top.rows() + i) = bottom.row(i);
    }
    return out;
}

Matrix naive_product(const Matrix& x, const Matrix& y) {
    Matrix out = Matrix::Zero(x.rows(), y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < y.cols(); ++j) {
            double s = 0.0;
            for (Eigen::Index k = 0; k < x.cols(); ++k) {
                s += x(i, k) * y(k, j);
            }
            out(i, j) = s;
        }
    }
    return out;
}

// Accelerated projected gradient (FISTA) with function-value restarts.
Vector solve_dual_fista(const Matrix& q, const Vector& lin, const Vector& upper) {
    const Eigen::Index n = lin.size();
    double lipschitz = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            lipschitz += q(i, j) * q(i, j);
        }
    }
    lipschitz = std::max(std::sqrt(lipschitz), 1e-12);
    const double step = 1.0 / lipschitz;
    Vector x = Vector::Zero(n);
    Vector y = x;
    double t = 1.0;
    double last = qp_objective(q, lin, x);
    for (int it = 0; it < 2000000; ++it) {
        const Vector grad = lin - naive_product(q, y);
        Vector next(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            next[i] = std::clamp(y[i] + step * grad[i], 0.0, upper[i]);
        }
        const double obj = qp_objective(q, lin, next);
        if (obj < last) {
            y = x;  // restart the momentum
            t = 1.0;
            continue;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = next + ((t - 1.0) / t_next) * (next - x);
        for (Eigen::Index i = 0; i < n; ++i) {
            y[i] = std::clamp(y[i], 0.0, upper[i]);
        }
        x = next;
        t = t_next;
        last = obj;
        if (it % 64 == 0 && qp_residual(q, lin, upper, x) < 1e-13) {
            break;
        }
    }
    return x;
}

// Fixes coordinates within `cut * upper` of a bound, solves Q_FF x_F = lin_F -
// Q_FU upper_U for the rest on a maximal independent subset of free rows, and
// returns the point if it lies in the box.
std::optional<Vector> polish_on_face(const Matrix& q, const Vector& lin, const Vector& upper, const Vector& x,
                                     double cut) {
    const Eigen::Index n = lin.size();
    Vector out = Vector::Zero(n);
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (x[i] >= upper[i] * (1.0 - cut)) {
            out[i] = upper[i];
        } else if (x[i] > upper[i] * cut) {
            free.push_back(i);
        }
    }
    // Greedy independent subset by Gram-Schmidt on the rows of Q_FF.
    std::vector<Eigen::Index> kept;
    std::vector<Vector> basis;
    for (Eigen::Index i : free) {
        Vector row(static_cast<Eigen::Index>(free.size()));
        for (std::size_t j = 0; j < free.size(); ++j) {
            row[static_cast<Eigen::Index>(j)] = q(i, free[j]);
        }
        const double norm = row.norm();
        for (const Vector& b : basis) {
            row -= row.dot(b) * b;
        }
        if (row.norm() > 1e-9 * std::max(1.0, norm)) {
            basis.push_back(row / row.norm());
            kept.push_back(i);
        }
    }
    const auto k = static_cast<Eigen::Index>(kept.size());
    Matrix a(k, k);
    Vector rhs(k);
    for (Eigen::Index r = 0; r < k; ++r) {
        rhs[r] = lin[kept[static_cast<std::size_t>(r)]];
        for (Eigen::Index j = 0; j < n; ++j) {
            rhs[r] -= q(kept[static_cast<std::size_t>(r)], j) * out[j];
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            a(r, c) = q(kept[static_cast<std::size_t>(r)], kept[static_cast<std::size_t>(c)]);
        }
    }
    const auto sol = k > 0 ? gauss_solve(a, rhs) : std::optional<Vector>(Vector(0));
    if (!sol) {
        return std::nullopt;
    }
    for (Eigen::Index r = 0; r < k; ++r) {
        const Eigen::Index i = kept[static_cast<std::size_t>(r)];
        const double v = (*sol)[r];
        if (v < -1e-12 * upper[i] || v > upper[i] * (1.0 + 1e-12)) {
            return std::nullopt;
        }
        out[i] = std::clamp(v, 0.0, upper[i]);
    }
    return out;
}

// One plane: hug `own`, keep `away` at distance >= 1 and `rest` at >= 1 - eps
// on the side given by `sign` (-1 for the first plane, +1 for the second).
ReferencePlane reference_plane(const Matrix& own, const Matrix& away, const Matrix& rest, double c_away,
                               double c_rest, double eps, double delta, double sign) {
    const Matrix h = with_ones(own);
    const Matrix n = stack(with_ones(away), with_ones(rest));
    Matrix hth = naive_product(h.transpose(), h);
    for (Eigen::Index i = 0; i < hth.rows(); ++i) {
        hth(i, i) += delta;
    }
    const Matrix inv = gauss_jordan_inverse(hth);
    const Matrix q = naive_product(naive_product(n, inv), n.transpose());
    const Eigen::Index na = away.rows();
    Vector lin(n.rows());
    Vector upper(n.rows());
    for (Eigen::Index i = 0; i < n.rows(); ++i) {
        lin[i] = i < na ? 1.0 : 1.0 - eps;
        upper[i] = i < na ? c_away : c_rest;
    }
    // Gap between the regularized primal at u = sign * S^-1 N' x and the dual at x.
    const auto evaluate = [&](const Vector& dual) {
        const Vector u = sign * naive_product(inv, naive_product(n.transpose(), dual));
        const Vector hu = naive_product(h, u);
        const Vector nu = naive_product(n, u);
        double primal = 0.5 * hu.squaredNorm() + 0.5 * delta * u.squaredNorm();
        for (Eigen::Index i = 0; i < n.rows(); ++i) {
            primal += upper[i] * std::max(0.0, lin[i] - sign * nu[i]);
        }
        return std::pair{u, primal - qp_objective(q, lin, dual)};
    };

    Vector best = solve_dual_fista(q, lin, upper);
    double best_gap = evaluate(best).second;
    // First-order iterations stall on ill-conditioned duals; finish by solving
    // the equality system of the face FISTA points at, for a range of cutoffs.
    for (double cut = 1e-3; cut >= 1e-10; cut *= 0.1) {
        if (auto polished = polish_on_face(q, lin, upper, best, cut)) {
            const double gap = evaluate(*polished).second;
            if (gap < best_gap) {
                best = *polished;
                best_gap = gap;
            }
        }
    }

    const auto [u, gap] = evaluate(best);
    ReferencePlane plane;
    plane.w = u.head(u.size() - 1);
    plane.b = u[u.size() - 1];
    plane.duality_gap = gap;
    return plane;
}

}  // namespace

ReferenceTwinKsvc reference_twin_ksvc(const Matrix& a, const Matrix& b, const Matrix& c, double c1, double c2,
                                      double c3, double c4, double eps, double delta) {
    ReferenceTwinKsvc out;
    out.first = reference_plane(a, b, c, c1, c2, eps, delta, -1.0);
    out.second = reference_plane(b, a, c, c3, c4, eps, delta, +1.0);
    return out;
}

double student_t_two_sided_series(double t, int df) {
    // P(|T| <= t) = A(t | df); Abramowitz and Stegun 26.7.3 and 26.7.4.
    const long double theta = std::atan(std::abs(static_cast<long double>(t)) / std::sqrt(static_cast<long double>(df)));
    const long double s = std::sin(theta);
    const long double c2 = std::cos(theta) * std::cos(theta);
    long double a = 0.0L;
    if (df % 2 == 1) {
        long double term = std::cos(theta);
        long double sum = df > 1 ? term : 0.0L;
        for (int k = 3; k <= df - 2; k += 2) {
            term *= c2 * static_cast<long double>(k - 1) / static_cast<long double>(k);
            sum += term;
        }
        a = 2.0L / std::numbers::pi_v<long double> * (theta + s * sum);
    } else {
        long double term = 1.0L;
        long double sum = 1.0L;
        for (int k = 2; k <= df - 2; k += 2) {
            term *= c2 * static_cast<long double>(k - 1) / static_cast<long double>(k);
            sum += term;
        }
        a = s * sum;
    }
    return static_cast<double>(1.0L - a);
}

Matrix random_normal(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double sd) {
    std::normal_distribution<double> dist(0.0, sd);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = dist(rng);
        }
    }
    return m;
}

Matrix random_gram(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rows, double scale) {
    const Matrix g = random_normal(rng, rows, n);
    return scale * naive_product(g.transpose(), g);
}

LabeledDataset blobs(std::size_t classes, std::size_t per_class, double spread, double sd, std::uint64_t seed,
                     Eigen::Index dims) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sd);
    LabeledDataset data;
    data.features.resize(static_cast<Eigen::Index>(classes * per_class), dims);
    for (std::size_t k = 0; k < classes; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(classes);
        for (std::size_t i = 0; i < per_class; ++i) {
            const auto row = static_cast<Eigen::Index>(k * per_class + i);
            for (Eigen::Index j = 0; j < dims; ++j) {
                const double center = j == 0 ? spread * std::cos(angle) : j == 1 ? spread * std::sin(angle) : 0.0;
                data.features(row, j) = center + noise(rng);
            }
            data.labels.push_back(static_cast<Label>(k));
        }
    }
    for (std::size_t k = 0; k < classes; ++k) {
        data.label_names.push_back("class" + std::to_string(k));
    }
    return data;
}

}  // namespace gbtwin::testing
