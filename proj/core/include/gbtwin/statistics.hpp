#pragma once

#include "gbtwin/errors.hpp"

#include <cstddef>
#include <span>
#include <string>

namespace gbtwin {

enum class TestKind { paired_t, wilcoxon };

[[nodiscard]] std::string to_string(TestKind kind);

struct TestResult {
    TestKind kind = TestKind::paired_t;
    double statistic = 0.0;
    double p_value = 1.0;  ///< two-sided
    std::size_t n = 0;     ///< pairs used (nonzero differences for Wilcoxon)
};

struct Descriptive {
    double mean = 0.0;
    double std_dev = 0.0;  ///< population (divisor n)
    double min = 0.0;
    double max = 0.0;
};

[[nodiscard]] double mean(std::span<const double> x);
/// Divisor n - 1.
[[nodiscard]] double sample_std(std::span<const double> x);
/// Divisor n.
[[nodiscard]] double population_std(std::span<const double> x);
[[nodiscard]] Descriptive describe(std::span<const double> x);

/// I_x(a, b) by Lentz's continued fraction, using the symmetry relation where it converges faster.
[[nodiscard]] double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
[[nodiscard]] double student_t_cdf(double t, double df);

/**
 * Paired t-test on d = a - b: t = mean(d) / (sd(d) / sqrt(n)) with the n - 1
 * divisor, two-sided p from Student's t with n - 1 degrees of freedom.
 */
[[nodiscard]] TestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/**
 * Wilcoxon signed-rank test. Zero differences are dropped, tied magnitudes get
 * average ranks, W is the smaller signed-rank sum, and the two-sided p value is
 * exact: 2 P(W+ <= W) under the null sign-flip distribution, capped at 1.
 */
[[nodiscard]] TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

}  // namespace gbtwin
