#pragma once

#include "gbtwin/numerics.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gbtwin {

/// Dense class identifier, 0..K-1 in first-appearance order of the source file.
using Label = int;

struct LabeledDataset {
    Matrix features;
    std::vector<Label> labels;
    /// Original label text per identifier; may be empty for synthetic data.
    std::vector<std::string> label_names;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t dims() const noexcept { return static_cast<std::size_t>(features.cols()); }

    /// Sorted distinct labels present.
    [[nodiscard]] std::vector<Label> distinct_labels() const;

    /// Checks row/label agreement and finiteness; `min_classes` distinct labels required.
    void validate(std::size_t min_classes = 1) const;

    /// Rows picked by `indices`, keeping label_names.
    [[nodiscard]] LabeledDataset subset(std::span<const std::size_t> indices) const;

    /// Name of label `l`, or its decimal text when names are unknown.
    [[nodiscard]] std::string label_name(Label l) const;
};

}  // namespace gbtwin
