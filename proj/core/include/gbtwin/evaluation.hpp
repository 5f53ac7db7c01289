#pragma once

#include "gbtwin/multiclass.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gbtwin {

/// 100 * matches / length.
[[nodiscard]] double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

/**
 * Macro one-vs-rest AUC in percent. Column k of `scores` belongs to
 * `classes[k]`; each class's AUC is the Mann-Whitney probability that a
 * member outscores a non-member, ties counting one half.
 */
[[nodiscard]] double macro_ovr_auc(const Matrix& scores, std::span<const Label> truth,
                                   std::span<const Label> classes);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Per-class shuffle, then round(fraction * class size) rows of each class go to train.
[[nodiscard]] Split stratified_split(const LabeledDataset& data, double train_fraction, std::uint64_t seed);

/// k stratified folds; each fold's test indices, sorted.
[[nodiscard]] std::vector<std::vector<std::size_t>> stratified_folds(const LabeledDataset& data, std::size_t k,
                                                                     std::uint64_t seed);

struct FoldOutput {
    std::vector<Label> labels;
    Matrix scores;                    ///< per-class scores, may be empty
    std::vector<Label> score_classes;  ///< column labels of `scores`
};

using Predictor = std::function<FoldOutput(const Matrix& x)>;
/// Trains on one fold's training rows; `fold` is the 0-based fold index.
using Trainer = std::function<Predictor(const LabeledDataset& train, std::size_t fold)>;

struct EvalReport {
    std::string model;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  ///< population deviation across folds
    std::optional<double> macro_auc;
    double train_time_seconds = 0.0;  ///< mean per fold
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    std::optional<HyperParams> hyperparams;
    std::optional<GranulationSettings> granulation;
};

/// Fills mean and deviation from fold_accuracy.
void summarize(EvalReport& report);

[[nodiscard]] EvalReport kfold_cv(const LabeledDataset& data, std::size_t k, const Trainer& trainer,
                                  std::uint64_t seed);

/// One stratified train/test split reported as a single fold.
[[nodiscard]] EvalReport holdout(const LabeledDataset& data, double train_fraction, const Trainer& trainer,
                                 std::uint64_t seed);

/// Min-max scaling fitted on the training rows, then multiclass training.
[[nodiscard]] Trainer model_trainer(const TrainOptions& options);

/// JSON with every field; timing omitted when `with_timing` is false.
[[nodiscard]] std::string report_to_json(const EvalReport& report, bool with_timing = true);

/**
 * Penalty grids are applied as two independent values: c_focal sets c1 and c3,
 * c_rest sets c2 and c4. `kernel_p` is only swept for the Gaussian kernel.
 * `min_points` and `purity` are only swept for the granular-ball mode.
 */
struct GridSpec {
    std::vector<double> c_focal = {1.0};
    std::vector<double> c_rest = {1.0};
    std::vector<double> epsilon = {0.1};
    std::vector<double> kernel_p = {1.0};
    std::vector<std::size_t> min_points = {2};
    std::vector<double> purity = {0.97};

    void validate() const;
};

struct GridCell {
    HyperParams hp;
    GranulationSettings granulation;
    EvalReport report;
    std::optional<std::string> error;  ///< set when the configuration failed; it then scores 0
};

struct GridResult {
    std::size_t best = 0;  ///< index into cells
    std::vector<GridCell> cells;

    [[nodiscard]] const GridCell& best_cell() const { return cells.at(best); }
};

/**
 * Exhaustive stratified k-fold search. Balls are generated once per
 * (fold, min_points, purity) and shared by every inner configuration. Cells
 * are ordered with (min_points, purity) outermost, then c_focal, c_rest,
 * epsilon, kernel_p; the first cell with the highest mean accuracy wins.
 * `base` supplies the model kind, kernel kind, delta and solver settings.
 */
[[nodiscard]] GridResult grid_search(const LabeledDataset& data, const GridSpec& grid, const TrainOptions& base,
                                     std::size_t folds, std::uint64_t seed);

}  // namespace gbtwin
