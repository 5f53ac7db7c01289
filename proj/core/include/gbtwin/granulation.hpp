#pragma once

#include "gbtwin/dataset.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace gbtwin {

struct KMeansResult {
    std::vector<std::size_t> assignment;  ///< cluster index per point
    Matrix centroids;                     ///< k x d
    std::size_t iterations = 0;
};

/**
 * Lloyd's algorithm with farthest-first seeding. The first seed is drawn from
 * a generator seeded with `seed`; later seeds are the points farthest from the
 * seeds chosen so far (lowest index on ties). Iterates until the assignment is
 * stable or 100 rounds have run.
 */
[[nodiscard]] KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed);

/// Share of the modal label.
[[nodiscard]] double purity(std::span<const Label> labels);

/// Most frequent label; the smallest identifier wins ties.
[[nodiscard]] Label modal_label(std::span<const Label> labels);

struct GranularBall {
    Vector centroid;
    double radius = 0.0;
    Label label = 0;
    std::size_t member_count = 0;
    std::vector<std::size_t> members;  ///< row indices into the granulated dataset
};

struct GranulationSettings {
    double theta = 0.97;         ///< purity threshold, in (0.5, 1]
    std::size_t min_points = 2;  ///< leaves smaller than this are dropped
    std::uint64_t seed = 0;

    void validate() const;

    friend bool operator==(const GranulationSettings&, const GranulationSettings&) = default;
};

struct BallSet {
    std::vector<GranularBall> balls;  ///< sorted by (label, centroid lexicographic)
    double theta = 1.0;
    std::size_t min_points = 1;
    std::size_t discarded_points = 0;  ///< members of leaves that failed a filter

    [[nodiscard]] std::map<Label, std::size_t> count_by_label() const;
    [[nodiscard]] std::vector<Label> labels() const;

    /// Centroids (rows) and radii of the balls carrying label `l`.
    [[nodiscard]] Matrix centroids_of(Label l) const;
    [[nodiscard]] Vector radii_of(Label l) const;
};

/**
 * Hierarchical k-means granulation. Impure nodes are split with k equal to the
 * number of labels they contain; leaves that are pure enough and have at least
 * `min_points` members become balls.
 *
 * Throws DegenerateGranulation when no ball survives, or when the input has
 * two or more labels and fewer than two of them survive.
 */
[[nodiscard]] BallSet generate_balls(const LabeledDataset& data, double theta, std::size_t min_points,
                                     std::uint64_t seed);

[[nodiscard]] inline BallSet generate_balls(const LabeledDataset& data, const GranulationSettings& s) {
    return generate_balls(data, s.theta, s.min_points, s.seed);
}

}  // namespace gbtwin
