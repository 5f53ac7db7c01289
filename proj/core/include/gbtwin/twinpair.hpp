#pragma once

#include "gbtwin/kernels.hpp"
#include "gbtwin/numerics.hpp"

#include <optional>

namespace gbtwin {

/**
 * Penalties and margins for one class pair.
 *
 * c1/c2 weigh the slack of the first plane against class q and the rest,
 * c3/c4 the slack of the second plane against class p and the rest. The ridge
 * added to H'H is `delta`, scaled by the mean diagonal of H'H when
 * `relative_delta` is set.
 */
struct HyperParams {
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    double c4 = 1.0;
    double epsilon = 0.1;
    double delta = 1e-4;
    bool relative_delta = true;
    KernelSpec kernel;

    void validate() const;

    friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

enum class PlaneMode { linear, kernel };

/// Centroids and radii of the focal classes p (a), q (b) and the rest (c).
struct PairProblem {
    Matrix a;
    Matrix b;
    Matrix c;  ///< may have zero rows when only two classes exist
    Vector r1;
    Vector r2;
    Vector r3;

    void validate() const;

    /// Raw points with zero radii.
    [[nodiscard]] static PairProblem from_points(Matrix a, Matrix b, Matrix c);
};

/// The two non-parallel planes trained for one class pair.
struct PlanePair {
    Vector w1;
    double b1 = 0.0;
    Vector w2;
    double b2 = 0.0;
    /// Stacked [a; b; c] rows for kernel mode; empty in linear mode.
    std::optional<Matrix> reference;
    KernelSpec kernel;

    [[nodiscard]] bool kernel_mode() const noexcept { return reference.has_value(); }

    /// Values of the two plane functions at a (normalized) point.
    [[nodiscard]] std::pair<double, double> evaluate(const Eigen::Ref<const Vector>& z) const;

    /// Row-wise plane values for a batch of points.
    [[nodiscard]] std::pair<Vector, Vector> evaluate_batch(const Matrix& z) const;

    /// Norms of w1, w2 in the space the planes live in (RKHS norm in kernel mode).
    [[nodiscard]] std::pair<double, double> weight_norms() const;
};

enum class PlaneSide { first, second };

/**
 * One assembled dual problem together with what is needed to map its solution
 * back to a plane. `own` is [X e] for the class the plane hugs; `constraints`
 * stacks [X e] for the class pushed away and for the rest.
 */
struct DualAssembly {
    PlaneSide side = PlaneSide::first;
    BoxQp qp;
    SpdFactor factor;  ///< of own'own + delta I
    Matrix own;
    Matrix constraints;
    double delta = 0.0;
    Eigen::Index other_count = 0;  ///< rows of `constraints` from the opposite focal class
};

[[nodiscard]] DualAssembly assemble_first_dual(const PairProblem& problem, const HyperParams& hp,
                                               PlaneMode mode = PlaneMode::linear);
[[nodiscard]] DualAssembly assemble_second_dual(const PairProblem& problem, const HyperParams& hp,
                                                PlaneMode mode = PlaneMode::linear);

/// Plane coefficients (w; b) from a solved dual.
[[nodiscard]] Vector recover_plane(const DualSolution& dual, const DualAssembly& assembly);

/**
 * Infinity norm of the regularized stationarity equation,
 * (own'own + delta I) theta -/+ constraints' x. Sign depends on the side.
 */
[[nodiscard]] double stationarity_residual(const DualAssembly& assembly, const Vector& theta, const Vector& x);

struct PairDiagnostics {
    Eigen::Index first_qp_size = 0;
    Eigen::Index second_qp_size = 0;
    double first_stationarity = 0.0;
    double second_stationarity = 0.0;
    double first_kkt = 0.0;
    double second_kkt = 0.0;
    bool dual_feasible = true;
    std::size_t sweeps = 0;
};

struct PairTraining {
    PlanePair planes;
    PairDiagnostics diagnostics;
};

struct SolverSettings {
    double tolerance = default_qp_tolerance;
    std::size_t max_sweeps = 0;  ///< 0: solver default
};

/// Trains both planes; DegeneratePair if either dual fails.
[[nodiscard]] PairTraining train_pair_detailed(const PairProblem& problem, const HyperParams& hp, PlaneMode mode,
                                               const SolverSettings& solver = {});

[[nodiscard]] inline PlanePair train_pair(const PairProblem& problem, const HyperParams& hp,
                                          PlaneMode mode = PlaneMode::linear) {
    return train_pair_detailed(problem, hp, mode).planes;
}

}  // namespace gbtwin
