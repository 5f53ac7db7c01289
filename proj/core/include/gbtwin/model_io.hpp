#pragma once

#include "gbtwin/multiclass.hpp"

#include <filesystem>
#include <string>

namespace gbtwin {

inline constexpr const char* model_format = "gbtwin-model/1";

/// JSON document with classes, mode, hyperparameters, normalization,
/// granulation settings and every plane. Doubles round-trip exactly.
[[nodiscard]] std::string model_to_json(const TrainedModel& model);

/// Parses a document produced by model_to_json; InvalidArgument on schema errors.
[[nodiscard]] TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
[[nodiscard]] TrainedModel load_model(const std::filesystem::path& path);

}  // namespace gbtwin
