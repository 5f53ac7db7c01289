#pragma once

#include "gbtwin/evaluation.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace gbtwin::cli {

/// The reduced search grid: c in {1/4, 1, 4} for both penalty groups,
/// epsilon in {0.1, 0.5}, min_points in {2, 3}, purity in {0.97, 0.99}.
[[nodiscard]] GridSpec reduced_grid();

/// Settings shared by the train, cv, grid, bench and sensitivity commands.
/// Command-line flags are applied on top of a config file.
struct RunConfig {
    ModelKind model = ModelKind::gb_twksvc;
    HyperParams hp;
    GranulationSettings granulation;
    GridSpec grid = reduced_grid();
    std::size_t folds = 5;
    std::optional<std::uint64_t> seed;
    std::optional<double> holdout;  ///< train fraction; cross-validation when unset
    bool normalize = true;
    bool normalize_distance = false;
    std::string output;

    /// Throws InvalidArgument on the first violated constraint.
    void validate() const;

    [[nodiscard]] TrainOptions train_options(std::uint64_t seed) const;
};

/**
 * Parses a JSON config. Recognized keys: model, kernel {kind, p},
 * hyperparams {c1, c2, c3, c4, epsilon, delta, relative_delta},
 * granulation {theta, min_points}, grid {c_focal, c_rest, epsilon, kernel_p,
 * min_points, purity}, folds, seed, holdout, normalize, normalize_distance,
 * output. Unknown keys are rejected.
 */
[[nodiscard]] RunConfig parse_run_config(const std::string& text);

}  // namespace gbtwin::cli
