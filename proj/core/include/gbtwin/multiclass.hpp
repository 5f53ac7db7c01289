#pragma once

#include "gbtwin/granulation.hpp"
#include "gbtwin/normalize.hpp"
#include "gbtwin/twinpair.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gbtwin {

enum class ModelKind {
    gb_twksvc,  ///< pairwise planes trained on granular balls
    twin_ksvc,  ///< pairwise planes trained on raw points
    ovr_tsvm,   ///< one twin SVM per class against the rest
};

[[nodiscard]] std::string to_string(ModelKind kind);
[[nodiscard]] ModelKind parse_model_kind(std::string_view name);

/// A trained plane pair plus the weight norms used by distance comparisons.
struct PlaneRecord {
    PlanePair planes;
    double norm1 = 0.0;
    double norm2 = 0.0;

    [[nodiscard]] static PlaneRecord from(PlanePair planes);
};

struct TrainedModel {
    ModelKind kind = ModelKind::gb_twksvc;
    std::vector<Label> classes;  ///< sorted
    std::vector<std::string> label_names;
    Eigen::Index dims = 0;
    /// Pairwise modes: one entry per (p, q) with p < q.
    std::map<std::pair<Label, Label>, PlaneRecord> pairs;
    /// One-vs-rest mode: the class plane is plane 1, the rest plane is plane 2.
    std::map<Label, PlaneRecord> one_vs_rest;
    std::optional<MinMaxScaler> normalization;
    HyperParams hyperparams;
    std::optional<GranulationSettings> granulation;
    bool normalize_distance = false;

    [[nodiscard]] PlaneMode plane_mode() const noexcept {
        return hyperparams.kernel.kind == KernelKind::linear ? PlaneMode::linear : PlaneMode::kernel;
    }

    /// Applies the stored normalization (identity if none).
    [[nodiscard]] Matrix prepare(const Matrix& x) const;
};

/// Called once per trained pair, in (p, q) order, after training completes.
/// One-vs-rest models report each class plane as the pair (k, k).
using PairObserver = std::function<void(Label p, Label q, const PairDiagnostics&)>;

struct TrainOptions {
    ModelKind kind = ModelKind::gb_twksvc;
    HyperParams hp;
    GranulationSettings granulation;
    bool normalize = true;
    bool normalize_distance = false;
    SolverSettings solver;
    unsigned threads = 0;  ///< 0: hardware concurrency
    PairObserver observer;
};

/// Fits min-max scaling (if enabled), then trains.
[[nodiscard]] TrainedModel train(const LabeledDataset& data, const TrainOptions& options);

/**
 * Trains on data that is already scaled. `scaler` is stored in the model so
 * prediction can scale raw input. For the granular-ball mode, `balls` may carry
 * a precomputed granulation of `data`; otherwise one is generated.
 */
[[nodiscard]] TrainedModel train_prepared(const LabeledDataset& data, std::optional<MinMaxScaler> scaler,
                                          const TrainOptions& options, const BallSet* balls = nullptr);

enum class Vote { p, q, none };

/**
 * Ternary pair decision at an already scaled point. Plane 1 votes p when
 * f1 > -(1 - epsilon); plane 2 votes q when f2 < 1 - epsilon. When both fire,
 * the plane with the smaller |f| wins (optionally divided by its weight norm).
 */
[[nodiscard]] Vote vote_pair(const PlaneRecord& record, const Eigen::Ref<const Vector>& z, double epsilon,
                             bool normalize_distance = false);

/// Same rule applied to precomputed plane values.
[[nodiscard]] Vote vote_from_values(double f1, double f2, double epsilon, double norm1 = 1.0, double norm2 = 1.0,
                                    bool normalize_distance = false);

/**
 * Per-class scores for raw input rows (t x K, columns follow model.classes).
 * Pairwise modes return vote counts; the one-vs-rest mode returns the negated
 * normalized distance to each class plane.
 */
[[nodiscard]] Matrix decision_scores(const TrainedModel& model, const Matrix& x);

/// Vote counts of a pairwise model for raw input rows.
[[nodiscard]] Matrix vote_scores(const TrainedModel& model, const Matrix& x);

/// Highest-scoring class per row; the smallest class identifier wins ties.
[[nodiscard]] std::vector<Label> predict(const TrainedModel& model, const Matrix& x);

/// Labels from a score matrix as produced by decision_scores.
[[nodiscard]] std::vector<Label> labels_from_scores(const TrainedModel& model, const Matrix& scores);

}  // namespace gbtwin
