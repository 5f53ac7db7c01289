#include "gbtwin/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace gbtwin {

std::string to_string(TestKind kind) { return kind == TestKind::paired_t ? "paired-t" : "wilcoxon"; }

namespace {

void require_nonempty(std::span<const double> x) {
    if (x.empty()) {
        throw EmptyInput("statistic of an empty sample");
    }
}

void require_pairs(std::span<const double> a, std::span<const double> b, std::size_t min_n) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("paired samples have lengths " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    }
    if (a.size() < min_n) {
        throw InvalidArgument("paired test needs at least " + std::to_string(min_n) + " pairs");
    }
}

double sum_sq_dev(std::span<const double> x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) {
        s += (v - m) * (v - m);
    }
    return s;
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_cf(double a, double b, double x) {
    constexpr int max_terms = 10000;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_terms; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            return h;
        }
    }
    return h;
}

}  // namespace

double mean(std::span<const double> x) {
    require_nonempty(x);
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x) {
    if (x.size() < 2) {
        throw InvalidArgument("sample standard deviation needs at least two values");
    }
    return std::sqrt(sum_sq_dev(x) / static_cast<double>(x.size() - 1));
}

double population_std(std::span<const double> x) {
    require_nonempty(x);
    return std::sqrt(sum_sq_dev(x) / static_cast<double>(x.size()));
}

Descriptive describe(std::span<const double> x) {
    require_nonempty(x);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return {mean(x), population_std(x), *lo, *hi};
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw InvalidArgument("incomplete beta needs positive shape parameters");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument("incomplete beta argument must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) {
        throw InvalidArgument("degrees of freedom must be positive");
    }
    if (std::isinf(t)) {
        return t > 0 ? 1.0 : 0.0;
    }
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
    return t >= 0.0 ? 1.0 - tail : tail;
}

TestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    require_pairs(a, b, 2);
    const std::size_t n = a.size();
    std::vector<double> d(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i] - b[i];
        scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    }
    const double sd = sample_std(d);
    if (sd <= 1e-12 * std::max(1.0, scale)) {
        throw DegenerateVariance("differences have zero variance");
    }
    TestResult r;
    r.kind = TestKind::paired_t;
    r.n = n;
    r.statistic = mean(d) / (sd / std::sqrt(static_cast<double>(n)));
    const double df = static_cast<double>(n - 1);
    r.p_value = std::min(1.0, regularized_incomplete_beta(0.5 * df, 0.5, df / (df + r.statistic * r.statistic)));
    return r;
}

TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    require_pairs(a, b, 1);
    struct Diff {
        double magnitude;
        bool positive;
    };
    std::vector<Diff> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
        if (std::abs(d) > 1e-12 * scale) {
            diffs.push_back({std::abs(d), d > 0.0});
        }
    }
    if (diffs.empty()) {
        throw AllZeroDifferences("every paired difference is zero");
    }
    std::sort(diffs.begin(), diffs.end(), [](const Diff& x, const Diff& y) { return x.magnitude < y.magnitude; });

    // Doubled average ranks are integers, which makes the null distribution a
    // subset-sum count over integers.
    const std::size_t n = diffs.size();
    std::vector<long> rank2(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && diffs[j + 1].magnitude - diffs[i].magnitude <= 1e-12 * std::max(1.0, diffs[i].magnitude)) {
            ++j;
        }
        const auto tied = static_cast<long>(i + 1 + j + 1);  // twice the average of ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) {
            rank2[k] = tied;
        }
        i = j + 1;
    }
    long plus2 = 0;
    long total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += rank2[i];
        if (diffs[i].positive) {
            plus2 += rank2[i];
        }
    }
    const long w2 = std::min(plus2, total2 - plus2);

    // prob[s]: probability that the doubled positive-rank sum equals s.
    std::vector<double> prob(static_cast<std::size_t>(total2) + 1, 0.0);
    prob[0] = 1.0;
    long reach = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long r = rank2[i];
        for (long s = reach; s >= 0; --s) {
            const double v = prob[static_cast<std::size_t>(s)];
            if (v != 0.0) {
                prob[static_cast<std::size_t>(s + r)] += 0.5 * v;
                prob[static_cast<std::size_t>(s)] = 0.5 * v;
            }
        }
        reach += r;
    }
    double lower = 0.0;
    for (long s = 0; s <= w2; ++s) {
        lower += prob[static_cast<std::size_t>(s)];
    }

    TestResult res;
    res.kind = TestKind::wilcoxon;
    res.n = n;
    res.statistic = static_cast<double>(w2) / 2.0;
    res.p_value = std::min(1.0, 2.0 * lower);
    return res;
}

}  // namespace gbtwin
