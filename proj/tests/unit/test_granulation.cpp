#include "gbtwin/granulation.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gbtwin;

namespace {

LabeledDataset make(std::initializer_list<std::pair<std::vector<double>, Label>> rows) {
    LabeledDataset d;
    const auto dims = static_cast<Eigen::Index>(rows.begin()->first.size());
    d.features.resize(static_cast<Eigen::Index>(rows.size()), dims);
    Eigen::Index i = 0;
    for (const auto& [x, l] : rows) {
        for (Eigen::Index j = 0; j < dims; ++j) {
            d.features(i, j) = x[static_cast<std::size_t>(j)];
        }
        d.labels.push_back(l);
        ++i;
    }
    return d;
}

LabeledDataset random_dataset(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_dist(10, 300);
    std::uniform_int_distribution<int> d_dist(1, 6);
    std::uniform_int_distribution<int> k_dist(2, 4);
    const auto n = static_cast<Eigen::Index>(n_dist(rng));
    const auto d = static_cast<Eigen::Index>(d_dist(rng));
    const int k = k_dist(rng);
    std::uniform_int_distribution<int> label(0, k - 1);
    std::normal_distribution<double> noise(0.0, 1.0);
    LabeledDataset data;
    data.features.resize(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Label l = label(rng);
        data.labels.push_back(l);
        for (Eigen::Index j = 0; j < d; ++j) {
            data.features(i, j) = noise(rng) + (j == 0 ? 1.5 * l : 0.0);
        }
    }
    return data;
}

}  // namespace

TEST(KMeans, SingleClusterIsTheMean) {
    std::mt19937_64 rng(1);
    const Matrix x = gbtwin::testing::random_normal(rng, 20, 3);
    const KMeansResult r = kmeans(x, 1, 5);
    EXPECT_LE((r.centroids.row(0) - x.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KMeans, KEqualsNSaturates) {
    std::mt19937_64 rng(2);
    const Matrix x = gbtwin::testing::random_normal(rng, 6, 2);
    const KMeansResult r = kmeans(x, 6, 1);
    for (Eigen::Index i = 0; i < 6; ++i) {
        EXPECT_LE((r.centroids.row(static_cast<Eigen::Index>(r.assignment[static_cast<std::size_t>(i)])) - x.row(i))
                      .cwiseAbs()
                      .maxCoeff(),
                  1e-12);
    }
}

TEST(KMeans, SeparatedBlobsAndNearestCentroid) {
    const LabeledDataset data = gbtwin::testing::blobs(2, 40, 10.0, 0.5, 3);
    const KMeansResult r = kmeans(data.features, 2, 9);
    for (std::size_t i = 0; i < data.size(); ++i) {
        EXPECT_EQ(r.assignment[i] == r.assignment[0], data.labels[i] == data.labels[0]);
        // Brute-force nearest-centroid check.
        std::size_t nearest = 0;
        for (Eigen::Index k = 1; k < r.centroids.rows(); ++k) {
            const auto row = data.features.row(static_cast<Eigen::Index>(i));
            if ((row - r.centroids.row(k)).squaredNorm() <
                (row - r.centroids.row(static_cast<Eigen::Index>(nearest))).squaredNorm()) {
                nearest = static_cast<std::size_t>(k);
            }
        }
        EXPECT_EQ(r.assignment[i], nearest);
    }
}

TEST(KMeans, RejectsBadArguments) {
    EXPECT_THROW((void)kmeans(Matrix(0, 2), 1, 0), EmptyInput);
    EXPECT_THROW((void)kmeans(Matrix::Ones(3, 2), 4, 0), InvalidArgument);
    EXPECT_THROW((void)kmeans(Matrix::Ones(3, 2), 0, 0), InvalidArgument);
}

TEST(Purity, Examples) {
    EXPECT_DOUBLE_EQ(purity(std::vector<Label>{1, 1, 2}), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(purity(std::vector<Label>{7, 7, 7}), 1.0);
    EXPECT_DOUBLE_EQ(purity(std::vector<Label>{1, 2, 1, 2}), 0.5);
    EXPECT_EQ(modal_label(std::vector<Label>{2, 1, 2, 1}), 1);
    EXPECT_THROW((void)purity(std::vector<Label>{}), EmptyInput);
}

TEST(GenerateBalls, IdenticalPointsMakeOneZeroRadiusBall) {
    const LabeledDataset d = make({{{1.5, -2.0}, 0}, {{1.5, -2.0}, 0}, {{1.5, -2.0}, 0}, {{1.5, -2.0}, 0}, {{1.5, -2.0}, 0}});
    const BallSet set = generate_balls(d, 1.0, 1, 0);
    ASSERT_EQ(set.balls.size(), 1u);
    EXPECT_EQ(set.balls[0].radius, 0.0);
    EXPECT_EQ(set.balls[0].member_count, 5u);
    EXPECT_DOUBLE_EQ(set.balls[0].centroid[0], 1.5);
    EXPECT_DOUBLE_EQ(set.balls[0].centroid[1], -2.0);
}

TEST(GenerateBalls, XorLayoutGivesPureBalls) {
    const LabeledDataset d = make({{{0, 0}, 0}, {{1, 1}, 0}, {{0, 1}, 1}, {{1, 0}, 1}});
    const BallSet set = generate_balls(d, 1.0, 1, 0);
    EXPECT_GE(set.balls.size(), 2u);
    for (const auto& b : set.balls) {
        std::vector<Label> labels;
        for (auto m : b.members) {
            labels.push_back(d.labels[m]);
        }
        EXPECT_DOUBLE_EQ(purity(labels), 1.0);
    }
}

TEST(GenerateBalls, SmallLeavesAreDiscarded) {
    // A tight 3-point cluster of class 1 far from a 10-point cluster of class 0.
    const LabeledDataset d = make({{{0, 0}, 0}, {{0.1, 0}, 0}, {{0, 0.1}, 0}, {{0.1, 0.1}, 0}, {{0.05, 0}, 0},
                                   {{0, 0.05}, 0}, {{0.05, 0.05}, 0}, {{0.02, 0.08}, 0}, {{0.08, 0.02}, 0},
                                   {{0.03, 0.03}, 0}, {{9, 9}, 1}, {{9.1, 9}, 1}, {{9, 9.1}, 1}});
    EXPECT_THROW((void)generate_balls(d, 1.0, 5, 0), DegenerateGranulation);
    const BallSet kept = generate_balls(d, 1.0, 3, 0);
    EXPECT_EQ(kept.count_by_label().at(1), 1u);
}

TEST(GenerateBalls, SingleLabelInputNeedsOnlyOneBall) {
    const LabeledDataset d = make({{{0}, 4}, {{1}, 4}, {{2}, 4}});
    const BallSet set = generate_balls(d, 0.97, 1, 0);
    EXPECT_EQ(set.labels(), std::vector<Label>{4});
}

TEST(GenerateBalls, RejectsBadSettings) {
    const LabeledDataset d = make({{{0}, 0}, {{1}, 1}});
    EXPECT_THROW((void)generate_balls(d, 0.5, 1, 0), InvalidArgument);
    EXPECT_THROW((void)generate_balls(d, 1.01, 1, 0), InvalidArgument);
    EXPECT_THROW((void)generate_balls(d, 0.9, 0, 0), InvalidArgument);
}

TEST(GenerateBalls, PropertiesOnRandomDatasets) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> theta_dist(0.6, 1.0);
    std::uniform_int_distribution<int> m_dist(1, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const LabeledDataset data = random_dataset(rng);
        const double theta = theta_dist(rng);
        const auto m = static_cast<std::size_t>(m_dist(rng));
        const std::uint64_t seed = rng();
        BallSet set;
        try {
            set = generate_balls(data, theta, m, seed);
        } catch (const DegenerateGranulation&) {
            continue;
        }
        std::size_t covered = 0;
        for (const auto& b : set.balls) {
            ASSERT_GE(b.member_count, m);
            ASSERT_EQ(b.members.size(), b.member_count);
            std::vector<Label> labels;
            double far = 0.0;
            for (auto i : b.members) {
                labels.push_back(data.labels[i]);
                far = std::max(far, (data.features.row(static_cast<Eigen::Index>(i)).transpose() - b.centroid).norm());
            }
            ASSERT_GE(purity(labels), theta);
            ASSERT_EQ(modal_label(labels), b.label);
            ASSERT_NEAR(far, b.radius, 1e-9);
            covered += b.member_count;
        }
        ASSERT_EQ(covered + set.discarded_points, data.size());
        ASSERT_LE(set.balls.size() * m, data.size());
        std::size_t per_label = 0;
        for (const auto& [label, count] : set.count_by_label()) {
            per_label += count;
        }
        ASSERT_EQ(per_label, set.balls.size());

        const BallSet again = generate_balls(data, theta, m, seed);
        ASSERT_EQ(again.balls.size(), set.balls.size());
        for (std::size_t i = 0; i < set.balls.size(); ++i) {
            ASSERT_EQ(again.balls[i].members, set.balls[i].members);
            ASSERT_EQ(again.balls[i].centroid, set.balls[i].centroid);
            ASSERT_EQ(again.balls[i].radius, set.balls[i].radius);
        }
    }
}
