#include "gbtwin/dataset.hpp"

#include <algorithm>
#include <set>

namespace gbtwin {

std::vector<Label> LabeledDataset::distinct_labels() const {
    std::set<Label> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
}

void LabeledDataset::validate(std::size_t min_classes) const {
    if (static_cast<std::size_t>(features.rows()) != labels.size()) {
        throw DimensionMismatch("dataset has " + std::to_string(features.rows()) + " feature rows but " +
                                std::to_string(labels.size()) + " labels");
    }
    if (labels.empty()) {
        throw EmptyInput("dataset is empty");
    }
    require_finite(features, "dataset features");
    if (distinct_labels().size() < min_classes) {
        throw TooFewClasses("need at least " + std::to_string(min_classes) + " distinct labels");
    }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
    out.labels.reserve(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        out.features.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(indices[r]));
        out.labels.push_back(labels[indices[r]]);
    }
    out.label_names = label_names;
    return out;
}

std::string LabeledDataset::label_name(Label l) const {
    if (l >= 0 && static_cast<std::size_t>(l) < label_names.size()) {
        return label_names[static_cast<std::size_t>(l)];
    }
    return std::to_string(l);
}

}  // namespace gbtwin
