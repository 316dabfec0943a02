#pragma once

#include <string>
#include <vector>

namespace obfkit::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;        // two-sided where applicable
    int n = 0;                   // total observations
    std::string method;          // "exact" | "permutation" | "asymptotic"
};

// Spearman rank correlation with average ranks for ties. The p-value is an
// exact permutation test for n <= 8, a seeded 100,000-resample permutation
// test for n <= 10, and a t-approximation beyond. Throws std::invalid_argument
// on length mismatch, n < 3, or constant input (rho undefined).
TestResult spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Pearson chi-square goodness of fit against explicit expected counts
// (upper-tail p, df = k - 1). Throws std::invalid_argument on length
// mismatch, k < 2, or a non-positive expected cell.
TestResult chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& expected);

// Same test against the uniform distribution over the observed total.
TestResult chi_square_gof_uniform(const std::vector<double>& observed);

// Cohen's d with pooled standard deviation, sign = mean(a) - mean(b); the
// p-value is the pooled two-sample t-test. Throws std::invalid_argument when
// either sample has n < 2 or the pooled variance is zero.
TestResult cohens_d(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace obfkit::stats
