#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "obfkit/stats/tests.hpp"

using namespace obfkit;

TEST_CASE("spearman matches hand-computed coefficients") {
    stats::TestResult inverse = stats::spearman({1, 2, 3}, {3, 2, 1});
    CHECK(inverse.statistic == doctest::Approx(-1.0));
    CHECK(inverse.method == "exact");
    // Exactly 2 of the 3! permutations reach |rho| = 1.
    CHECK(inverse.p_value == doctest::Approx(2.0 / 6.0));

    stats::TestResult identical = stats::spearman({1, 2, 3}, {1, 2, 3});
    CHECK(identical.statistic == doctest::Approx(1.0));

    stats::TestResult partial = stats::spearman({1, 2, 3, 4}, {1, 3, 2, 4});
    CHECK(partial.statistic == doctest::Approx(0.8));
    CHECK(partial.n == 4);
}

TEST_CASE("spearman handles ties with average ranks") {
    // xs ranks: 1, 2.5, 2.5, 4 — the tie does not break monotonicity.
    stats::TestResult tied = stats::spearman({1, 2, 2, 3}, {10, 20, 30, 40});
    CHECK(tied.statistic > 0.9);
    CHECK(tied.statistic <= 1.0);
}

TEST_CASE("spearman is symmetric and rank-invariant") {
    std::vector<double> xs = {3, 1, 4, 1.5, 5, 9, 2.6};
    std::vector<double> ys = {2, 7, 1, 8, 2.8, 1.7, 3};
    stats::TestResult ab = stats::spearman(xs, ys);
    stats::TestResult ba = stats::spearman(ys, xs);
    CHECK(ab.statistic == doctest::Approx(ba.statistic));
    CHECK(ab.p_value == doctest::Approx(ba.p_value));

    // Strictly monotone transforms change neither ranks nor the result.
    std::vector<double> exp_xs, cube_ys;
    for (double x : xs) exp_xs.push_back(std::exp(x));
    for (double y : ys) cube_ys.push_back(y * y * y);
    stats::TestResult transformed = stats::spearman(exp_xs, cube_ys);
    CHECK(transformed.statistic == doctest::Approx(ab.statistic));
    CHECK(transformed.p_value == doctest::Approx(ab.p_value));
}

TEST_CASE("spearman picks the method by sample size") {
    std::vector<double> x8 = {1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> y8 = {1, 3, 2, 4, 6, 5, 8, 7};
    CHECK(stats::spearman(x8, y8).method == "exact");

    std::vector<double> x9 = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<double> y9 = {1, 3, 2, 4, 6, 5, 8, 7, 9};
    stats::TestResult sampled = stats::spearman(x9, y9);
    CHECK(sampled.method == "permutation");
    // Symmetry holds on the sampled path too (canonical argument order).
    CHECK(stats::spearman(y9, x9).p_value == doctest::Approx(sampled.p_value));

    std::vector<double> x12, y12 = {2, 1, 4, 3, 6, 5, 8, 7, 10, 9, 12, 11};
    for (int i = 1; i <= 12; ++i) x12.push_back(i);
    stats::TestResult asym = stats::spearman(x12, y12);
    CHECK(asym.method == "asymptotic");
    CHECK(asym.statistic == doctest::Approx(0.9580419580).epsilon(1e-9));
    CHECK(asym.p_value == doctest::Approx(9.5436e-07).epsilon(1e-3));
}

TEST_CASE("spearman rejects bad input") {
    CHECK_THROWS_AS(stats::spearman({1, 2}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(stats::spearman({1, 2, 3}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(stats::spearman({5, 5, 5}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("chi-square statistic and upper-tail p") {
    stats::TestResult none = stats::chi_square_gof({10, 10}, {10, 10});
    CHECK(none.statistic == doctest::Approx(0.0));
    CHECK(none.p_value == doctest::Approx(1.0));

    // (15-10)^2/10 + (5-10)^2/10 = 5.0 on one degree of freedom.
    stats::TestResult skew = stats::chi_square_gof({15, 5}, {10, 10});
    CHECK(skew.statistic == doctest::Approx(5.0));
    CHECK(skew.p_value == doctest::Approx(0.0253473).epsilon(1e-4));
    CHECK(skew.n == 20);
}

TEST_CASE("chi-square on the observed naming-pattern distribution") {
    // 42% / 40% / 16% / 2% of 1500 draws vs uniform. Hand computation:
    // (255^2 + 225^2 + 135^2 + 345^2) / 375 = 252900 / 375 = 674.4.
    stats::TestResult r = stats::chi_square_gof_uniform({630, 600, 240, 30});
    CHECK(r.statistic == doctest::Approx(674.4).epsilon(1e-9));
    CHECK(r.p_value < 0.001);
    CHECK(r.n == 1500);
}

TEST_CASE("chi-square rejects bad cells") {
    CHECK_THROWS_AS(stats::chi_square_gof({1, 2}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(stats::chi_square_gof({1, 2}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(stats::chi_square_gof_uniform({5}), std::invalid_argument);
}

TEST_CASE("cohens d matches the pooled formulation") {
    stats::TestResult d = stats::cohens_d({2, 4}, {0, 2});
    CHECK(d.statistic == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(d.p_value == doctest::Approx(0.2928932).epsilon(1e-6));

    stats::TestResult zero = stats::cohens_d({1, 2, 3}, {1, 2, 3});
    CHECK(zero.statistic == doctest::Approx(0.0));

    // Constant shift: |d| = shift / sd.
    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b;
    for (double x : a) b.push_back(x - 3.0);
    double sd = std::sqrt(2.5);  // sample sd of 1..5
    stats::TestResult shifted = stats::cohens_d(a, b);
    CHECK(shifted.statistic == doctest::Approx(3.0 / sd));
}

TEST_CASE("cohens d rejects degenerate samples") {
    CHECK_THROWS_AS(stats::cohens_d({1}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(stats::cohens_d({1, 1, 1}, {1, 1, 1}), std::invalid_argument);
}
