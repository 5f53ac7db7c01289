#include "gbtwin/twinpair.hpp"

#include <cmath>
#include <string>

namespace gbtwin {

void HyperParams::validate() const {
    for (double c : {c1, c2, c3, c4}) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw InvalidArgument("penalties c1..c4 must be positive and finite");
        }
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidArgument("epsilon must lie strictly between 0 and 1");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw InvalidArgument("delta must be nonnegative and finite");
    }
    kernel.validate();
}

void PairProblem::validate() const {
    if (a.rows() < 1 || b.rows() < 1) {
        throw InvalidArgument("each focal class needs at least one row");
    }
    if (a.cols() != b.cols() || (c.rows() > 0 && c.cols() != a.cols())) {
        throw DimensionMismatch("class blocks disagree on the feature count");
    }
    if (r1.size() != a.rows() || r2.size() != b.rows() || r3.size() != c.rows()) {
        throw DimensionMismatch("radius vectors must align with their class blocks");
    }
    for (const Vector* r : {&r1, &r2, &r3}) {
        require_finite(*r, "radii");
        if (r->size() > 0 && r->minCoeff() < 0.0) {
            throw InvalidArgument("radii must be nonnegative");
        }
    }
    require_finite(a, "class p block");
    require_finite(b, "class q block");
    require_finite(c, "rest block");
}

PairProblem PairProblem::from_points(Matrix a, Matrix b, Matrix c) {
    PairProblem p;
    p.r1 = Vector::Zero(a.rows());
    p.r2 = Vector::Zero(b.rows());
    p.r3 = Vector::Zero(c.rows());
    p.a = std::move(a);
    p.b = std::move(b);
    p.c = std::move(c);
    return p;
}

std::pair<double, double> PlanePair::evaluate(const Eigen::Ref<const Vector>& z) const {
    if (!reference) {
        if (z.size() != w1.size()) {
            throw DimensionMismatch("point has " + std::to_string(z.size()) + " features, plane expects " +
                                    std::to_string(w1.size()));
        }
        return {z.dot(w1) + b1, z.dot(w2) + b2};
    }
    const Matrix& d = *reference;
    if (z.size() != d.cols()) {
        throw DimensionMismatch("point has " + std::to_string(z.size()) + " features, kernel reference has " +
                                std::to_string(d.cols()));
    }
    Vector k(d.rows());
    for (Eigen::Index j = 0; j < d.rows(); ++j) {
        k[j] = kernel_value(kernel, z, d.row(j).transpose());
    }
    return {k.dot(w1) + b1, k.dot(w2) + b2};
}

std::pair<Vector, Vector> PlanePair::evaluate_batch(const Matrix& z) const {
    if (!reference) {
        if (z.cols() != w1.size()) {
            throw DimensionMismatch("points have " + std::to_string(z.cols()) + " features, plane expects " +
                                    std::to_string(w1.size()));
        }
        return {(z * w1).array() + b1, (z * w2).array() + b2};
    }
    const Matrix k = gram(z, *reference, kernel);
    return {(k * w1).array() + b1, (k * w2).array() + b2};
}

std::pair<double, double> PlanePair::weight_norms() const {
    if (!reference) {
        return {w1.norm(), w2.norm()};
    }
    const Matrix k = gram(*reference, *reference, kernel);
    return {std::sqrt(std::max(0.0, w1.dot(k * w1))), std::sqrt(std::max(0.0, w2.dot(k * w2)))};
}

namespace {

Matrix augment(const Matrix& x) {
    Matrix out(x.rows(), x.cols() + 1);
    out.leftCols(x.cols()) = x;
    out.col(x.cols()).setOnes();
    return out;
}

// Class blocks after the optional kernel map K(., D).
struct LiftedProblem {
    Matrix a;
    Matrix b;
    Matrix c;
    std::optional<Matrix> reference;
};

LiftedProblem lift(const PairProblem& problem, const HyperParams& hp, PlaneMode mode) {
    problem.validate();
    hp.validate();
    if (mode == PlaneMode::linear) {
        if (hp.kernel.kind != KernelKind::linear) {
            throw InvalidArgument("linear plane mode requires the linear kernel");
        }
        Matrix c = problem.c.rows() > 0 ? problem.c : Matrix(0, problem.a.cols());
        return {problem.a, problem.b, std::move(c), std::nullopt};
    }
    const Eigen::Index d = problem.a.cols();
    Matrix ref(problem.a.rows() + problem.b.rows() + problem.c.rows(), d);
    ref.topRows(problem.a.rows()) = problem.a;
    ref.middleRows(problem.a.rows(), problem.b.rows()) = problem.b;
    if (problem.c.rows() > 0) {
        ref.bottomRows(problem.c.rows()) = problem.c;
    }
    LiftedProblem out;
    out.a = gram(problem.a, ref, hp.kernel);
    out.b = gram(problem.b, ref, hp.kernel);
    out.c = problem.c.rows() > 0 ? gram(problem.c, ref, hp.kernel) : Matrix(0, ref.rows());
    out.reference = std::move(ref);
    return out;
}

DualAssembly assemble(PlaneSide side, const Matrix& own_x, const Matrix& other_x, const Matrix& rest_x,
                      const Vector& r_other, const Vector& r_rest, double c_other, double c_rest,
                      const HyperParams& hp) {
    Matrix own = augment(own_x);
    const Eigen::Index n_other = other_x.rows();
    const Eigen::Index n_rest = rest_x.rows();

    Matrix constraints(n_other + n_rest, own.cols());
    constraints.topRows(n_other) = augment(other_x);
    if (n_rest > 0) {
        constraints.bottomRows(n_rest) = augment(rest_x);
    }

    const Matrix gram_own = own.transpose() * own;
    const double delta = hp.relative_delta ? hp.delta * gram_own.diagonal().mean() : hp.delta;
    SpdFactor factor(gram_own, delta);

    // M = V (S + dI)^-1 V' = U U' with U = (L^-1 V')'.
    Matrix root = factor.half_solve(Matrix(constraints.transpose())).transpose();
    Matrix hessian = root * root.transpose();

    Vector linear(n_other + n_rest);
    Vector upper(n_other + n_rest);
    linear.head(n_other) = Vector::Ones(n_other) + r_other;
    upper.head(n_other).setConstant(c_other);
    if (n_rest > 0) {
        linear.tail(n_rest) = Vector::Constant(n_rest, 1.0 - hp.epsilon) + r_rest;
        upper.tail(n_rest).setConstant(c_rest);
    }

    return DualAssembly{
        .side = side,
        .qp = BoxQp(std::move(hessian), std::move(linear), std::move(upper), std::move(root)),
        .factor = std::move(factor),
        .own = std::move(own),
        .constraints = std::move(constraints),
        .delta = delta,
        .other_count = n_other,
    };
}

DualAssembly assemble_first(const LiftedProblem& p, const PairProblem& raw, const HyperParams& hp) {
    return assemble(PlaneSide::first, p.a, p.b, p.c, raw.r2, raw.r3, hp.c1, hp.c2, hp);
}

DualAssembly assemble_second(const LiftedProblem& p, const PairProblem& raw, const HyperParams& hp) {
    return assemble(PlaneSide::second, p.b, p.a, p.c, raw.r1, raw.r3, hp.c3, hp.c4, hp);
}

bool within_box(const DualSolution& s, const BoxQp& qp) {
    return (s.x.array() >= 0.0).all() && (s.x.array() <= qp.upper().array()).all();
}

}  // namespace

DualAssembly assemble_first_dual(const PairProblem& problem, const HyperParams& hp, PlaneMode mode) {
    return assemble_first(lift(problem, hp, mode), problem, hp);
}

DualAssembly assemble_second_dual(const PairProblem& problem, const HyperParams& hp, PlaneMode mode) {
    return assemble_second(lift(problem, hp, mode), problem, hp);
}

Vector recover_plane(const DualSolution& dual, const DualAssembly& assembly) {
    if (dual.x.size() != assembly.constraints.rows()) {
        throw DimensionMismatch("dual solution length does not match the assembled problem");
    }
    const Vector theta = assembly.factor.solve(Vector(assembly.constraints.transpose() * dual.x));
    // First plane: (H'H + dI) theta = -V'x. Second plane: (G'G + dI) theta = +R'x.
    return assembly.side == PlaneSide::first ? Vector(-theta) : theta;
}

double stationarity_residual(const DualAssembly& assembly, const Vector& theta, const Vector& x) {
    const Vector lhs = assembly.own.transpose() * (assembly.own * theta) + assembly.delta * theta;
    const Vector coupling = assembly.constraints.transpose() * x;
    const Vector r = assembly.side == PlaneSide::first ? Vector(lhs + coupling) : Vector(lhs - coupling);
    return r.size() == 0 ? 0.0 : r.cwiseAbs().maxCoeff();
}

PairTraining train_pair_detailed(const PairProblem& problem, const HyperParams& hp, PlaneMode mode,
                                 const SolverSettings& solver) {
    const LiftedProblem lifted = lift(problem, hp, mode);
    const DualAssembly first = assemble_first(lifted, problem, hp);
    const DualAssembly second = assemble_second(lifted, problem, hp);

    auto solve = [&](const DualAssembly& a, const char* which) {
        try {
            return solve_box_qp(a.qp, solver.tolerance, solver.max_sweeps);
        } catch (const DidNotConverge& e) {
            throw DegeneratePair(std::string(which) + " dual: " + e.what());
        }
    };
    const DualSolution s1 = solve(first, "first");
    const DualSolution s2 = solve(second, "second");

    const Vector theta1 = recover_plane(s1, first);
    const Vector theta2 = recover_plane(s2, second);
    const Eigen::Index len = theta1.size() - 1;

    PairTraining out;
    out.planes.w1 = theta1.head(len);
    out.planes.b1 = theta1[len];
    out.planes.w2 = theta2.head(len);
    out.planes.b2 = theta2[len];
    out.planes.reference = lifted.reference;
    out.planes.kernel = hp.kernel;

    out.diagnostics.first_qp_size = first.qp.size();
    out.diagnostics.second_qp_size = second.qp.size();
    out.diagnostics.first_stationarity = stationarity_residual(first, theta1, s1.x);
    out.diagnostics.second_stationarity = stationarity_residual(second, theta2, s2.x);
    out.diagnostics.first_kkt = s1.kkt_residual;
    out.diagnostics.second_kkt = s2.kkt_residual;
    out.diagnostics.dual_feasible = within_box(s1, first.qp) && within_box(s2, second.qp);
    out.diagnostics.sweeps = s1.iterations + s2.iterations;
    return out;
}

}  // namespace gbtwin
