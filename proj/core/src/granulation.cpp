#include "gbtwin/granulation.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace gbtwin {

namespace {

constexpr std::size_t max_lloyd_rounds = 100;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

std::vector<std::size_t> nearest_assignment(const Matrix& points, const Matrix& centroids) {
    std::vector<std::size_t> out(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (points.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<std::size_t>(c);
            }
        }
        out[static_cast<std::size_t>(i)] = arg;
    }
    return out;
}

// Farthest-first traversal; the first seed comes from the generator.
std::vector<Eigen::Index> farthest_first(const Matrix& points, std::size_t k, std::uint64_t seed) {
    const Eigen::Index n = points.rows();
    std::mt19937_64 rng(seed);
    std::vector<Eigen::Index> seeds;
    seeds.push_back(static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n)));
    Vector min_dist(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        min_dist[i] = (points.row(i) - points.row(seeds[0])).squaredNorm();
    }
    while (seeds.size() < k) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (min_dist[i] > best) {
                best = min_dist[i];
                arg = i;
            }
        }
        seeds.push_back(arg);
        for (Eigen::Index i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], (points.row(i) - points.row(arg)).squaredNorm());
        }
    }
    return seeds;
}

bool all_rows_identical(const Matrix& points) {
    for (Eigen::Index i = 1; i < points.rows(); ++i) {
        if (points.row(i) != points.row(0)) {
            return false;
        }
    }
    return true;
}

struct Leaf {
    std::vector<std::size_t> members;
};

class Granulator {
  public:
    Granulator(const LabeledDataset& data, double theta) : data_(data), theta_(theta) {}

    void split(std::vector<std::size_t> members, std::uint64_t seed) {
        std::vector<Label> labels;
        labels.reserve(members.size());
        for (auto m : members) {
            labels.push_back(data_.labels[m]);
        }
        const Matrix points = rows(members);
        if (purity(labels) >= theta_ || all_rows_identical(points)) {
            leaves_.push_back({std::move(members)});
            return;
        }
        const std::size_t distinct = std::set<Label>(labels.begin(), labels.end()).size();
        const std::size_t k = std::min(std::max<std::size_t>(distinct, 2), members.size());

        const KMeansResult km = kmeans(points, k, seed);
        std::vector<std::vector<std::size_t>> groups(k);
        for (std::size_t i = 0; i < members.size(); ++i) {
            groups[km.assignment[i]].push_back(members[i]);
        }
        std::erase_if(groups, [](const auto& g) { return g.empty(); });
        if (groups.size() < 2) {
            groups = two_way_split(points, members, seed);
        }
        for (std::size_t g = 0; g < groups.size(); ++g) {
            split(std::move(groups[g]), splitmix64(seed + 0x632BE59BD9B4E019ULL * (g + 1)));
        }
    }

    [[nodiscard]] const std::vector<Leaf>& leaves() const noexcept { return leaves_; }

  private:
    [[nodiscard]] Matrix rows(const std::vector<std::size_t>& members) const {
        Matrix out(static_cast<Eigen::Index>(members.size()), data_.features.cols());
        for (std::size_t i = 0; i < members.size(); ++i) {
            out.row(static_cast<Eigen::Index>(i)) = data_.features.row(static_cast<Eigen::Index>(members[i]));
        }
        return out;
    }

    // Used only when Lloyd collapses to a single cluster.
    static std::vector<std::vector<std::size_t>> two_way_split(const Matrix& points,
                                                               const std::vector<std::size_t>& members,
                                                               std::uint64_t seed) {
        const auto seeds = farthest_first(points, 2, seed);
        std::vector<std::vector<std::size_t>> groups(2);
        for (Eigen::Index i = 0; i < points.rows(); ++i) {
            const double d0 = (points.row(i) - points.row(seeds[0])).squaredNorm();
            const double d1 = (points.row(i) - points.row(seeds[1])).squaredNorm();
            groups[d1 < d0 ? 1 : 0].push_back(members[static_cast<std::size_t>(i)]);
        }
        return groups;
    }

    const LabeledDataset& data_;
    double theta_;
    std::vector<Leaf> leaves_;
};

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) {
        throw EmptyInput("kmeans on an empty point set");
    }
    if (k < 1 || k > n) {
        throw InvalidArgument("kmeans needs 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
    const Eigen::Index d = points.cols();
    const auto seeds = farthest_first(points, k, seed);

    KMeansResult res;
    res.centroids.resize(static_cast<Eigen::Index>(k), d);
    for (std::size_t c = 0; c < k; ++c) {
        res.centroids.row(static_cast<Eigen::Index>(c)) = points.row(seeds[c]);
    }
    res.assignment = nearest_assignment(points, res.centroids);

    for (std::size_t round = 1; round <= max_lloyd_rounds; ++round) {
        res.iterations = round;
        Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), d);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums.row(static_cast<Eigen::Index>(res.assignment[i])) += points.row(static_cast<Eigen::Index>(i));
            ++counts[res.assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                res.centroids.row(static_cast<Eigen::Index>(c)) =
                    sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
            }
        }
        auto next = nearest_assignment(points, res.centroids);
        const bool stable = next == res.assignment;
        res.assignment = std::move(next);
        if (stable) {
            break;
        }
    }
    return res;
}

double purity(std::span<const Label> labels) {
    if (labels.empty()) {
        throw EmptyInput("purity of an empty label list");
    }
    const Label mode = modal_label(labels);
    const auto count = std::count(labels.begin(), labels.end(), mode);
    return static_cast<double>(count) / static_cast<double>(labels.size());
}

Label modal_label(std::span<const Label> labels) {
    if (labels.empty()) {
        throw EmptyInput("modal label of an empty list");
    }
    std::map<Label, std::size_t> counts;
    for (Label l : labels) {
        ++counts[l];
    }
    Label best = counts.begin()->first;
    std::size_t best_count = 0;
    for (const auto& [label, count] : counts) {
        if (count > best_count) {  // map order makes the smallest label win ties
            best = label;
            best_count = count;
        }
    }
    return best;
}

void GranulationSettings::validate() const {
    if (!(theta > 0.5 && theta <= 1.0)) {
        throw InvalidArgument("purity threshold must lie in (0.5, 1]");
    }
    if (min_points < 1) {
        throw InvalidArgument("min_points must be at least 1");
    }
}

std::map<Label, std::size_t> BallSet::count_by_label() const {
    std::map<Label, std::size_t> out;
    for (const auto& b : balls) {
        ++out[b.label];
    }
    return out;
}

std::vector<Label> BallSet::labels() const {
    std::vector<Label> out;
    for (const auto& [label, count] : count_by_label()) {
        out.push_back(label);
    }
    return out;
}

Matrix BallSet::centroids_of(Label l) const {
    std::vector<const GranularBall*> picked;
    for (const auto& b : balls) {
        if (b.label == l) {
            picked.push_back(&b);
        }
    }
    const Eigen::Index d = balls.empty() ? 0 : balls.front().centroid.size();
    Matrix out(static_cast<Eigen::Index>(picked.size()), d);
    for (std::size_t i = 0; i < picked.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = picked[i]->centroid.transpose();
    }
    return out;
}

Vector BallSet::radii_of(Label l) const {
    std::vector<double> r;
    for (const auto& b : balls) {
        if (b.label == l) {
            r.push_back(b.radius);
        }
    }
    return Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(r.size()));
}

BallSet generate_balls(const LabeledDataset& data, double theta, std::size_t min_points, std::uint64_t seed) {
    GranulationSettings{theta, min_points, seed}.validate();
    data.validate();

    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    Granulator granulator(data, theta);
    granulator.split(std::move(all), seed);

    BallSet set;
    set.theta = theta;
    set.min_points = min_points;
    for (const auto& leaf : granulator.leaves()) {
        std::vector<Label> labels;
        for (auto m : leaf.members) {
            labels.push_back(data.labels[m]);
        }
        if (leaf.members.size() < min_points || purity(labels) < theta) {
            set.discarded_points += leaf.members.size();
            continue;
        }
        GranularBall ball;
        ball.centroid = Vector::Zero(data.features.cols());
        for (auto m : leaf.members) {
            ball.centroid += data.features.row(static_cast<Eigen::Index>(m)).transpose();
        }
        ball.centroid /= static_cast<double>(leaf.members.size());
        for (auto m : leaf.members) {
            ball.radius = std::max(
                ball.radius, (data.features.row(static_cast<Eigen::Index>(m)).transpose() - ball.centroid).norm());
        }
        ball.label = modal_label(labels);
        ball.member_count = leaf.members.size();
        ball.members = leaf.members;
        std::sort(ball.members.begin(), ball.members.end());
        set.balls.push_back(std::move(ball));
    }

    std::sort(set.balls.begin(), set.balls.end(), [](const GranularBall& a, const GranularBall& b) {
        if (a.label != b.label) {
            return a.label < b.label;
        }
        return std::lexicographical_compare(a.centroid.begin(), a.centroid.end(), b.centroid.begin(),
                                            b.centroid.end());
    });

    const std::size_t required = std::min<std::size_t>(2, data.distinct_labels().size());
    if (set.balls.empty() || set.labels().size() < required) {
        throw DegenerateGranulation("granulation kept balls for fewer than two labels (" +
                                    std::to_string(set.balls.size()) + " balls, " +
                                    std::to_string(set.discarded_points) + " points discarded)");
    }
    return set;
}

}  // namespace gbtwin
