#include "obfkit/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "obfkit/util/rng.hpp"

namespace obfkit::stats {
namespace {

// ---- special functions (regularized incomplete gamma / beta) --------------

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-14;

double gamma_p_series(double a, double x) {
    double term = 1.0 / a, sum = term, ap = a;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x); chi-square upper tail is
// Q(df/2, x/2).
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double beta_contfrac(double a, double b, double x) {
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::abs(d) < 1e-300) d = 1e-300;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = 1.0 + aa / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = 1.0 + aa / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
}

// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_contfrac(a, b, x) / a;
    return 1.0 - front * beta_contfrac(b, a, 1.0 - x) / b;
}

// Two-sided p for Student's t with df degrees of freedom.
double t_two_sided(double t, double df) { return beta_inc(df / 2.0, 0.5, df / (df + t * t)); }

// ---- ranks and correlation -------------------------------------------------

std::vector<double> average_ranks(const std::vector<double>& xs) {
    size_t n = xs.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    size_t n = a.size();
    double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double cov = 0, va = 0, vb = 0;
    for (size_t i = 0; i < n; ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) throw std::invalid_argument("constant input: rho undefined");
    return cov / std::sqrt(va * vb);
}

}  // namespace

TestResult spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("spearman: length mismatch");
    if (xs.size() < 3) throw std::invalid_argument("spearman: need n >= 3");

    // Canonical argument order keeps the sampled permutation path symmetric.
    const std::vector<double>* first = &xs;
    const std::vector<double>* second = &ys;
    if (std::lexicographical_compare(second->begin(), second->end(), first->begin(),
                                     first->end()))
        std::swap(first, second);

    std::vector<double> rx = average_ranks(*first);
    std::vector<double> ry = average_ranks(*second);
    double rho = pearson(rx, ry);

    size_t n = xs.size();
    TestResult result;
    result.statistic = rho;
    result.n = static_cast<int>(n);

    double target = std::abs(rho) - 1e-12;
    if (n <= 8) {
        // Full enumeration over n! <= 40,320 permutations.
        std::vector<double> perm = ry;
        std::sort(perm.begin(), perm.end());
        long total = 0, at_least = 0;
        do {
            ++total;
            if (std::abs(pearson(rx, perm)) >= target) ++at_least;
        } while (std::next_permutation(perm.begin(), perm.end()));
        result.p_value = static_cast<double>(at_least) / static_cast<double>(total);
        result.method = "exact";
    } else if (n <= 10) {
        constexpr int kResamples = 100000;
        util::Rng rng(0x73706561726dULL);  // fixed seed
        std::vector<double> perm = ry;
        long at_least = 0;
        for (int i = 0; i < kResamples; ++i) {
            rng.shuffle(perm);
            if (std::abs(pearson(rx, perm)) >= target) ++at_least;
        }
        result.p_value = static_cast<double>(at_least + 1) / (kResamples + 1);
        result.method = "permutation";
    } else {
        if (std::abs(rho) >= 1.0) {
            result.p_value = 0.0;
        } else {
            double t = rho * std::sqrt((static_cast<double>(n) - 2.0) / (1.0 - rho * rho));
            result.p_value = t_two_sided(t, static_cast<double>(n) - 2.0);
        }
        result.method = "asymptotic";
    }
    return result;
}

TestResult chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& expected) {
    if (observed.size() != expected.size())
        throw std::invalid_argument("chi_square_gof: length mismatch");
    if (observed.size() < 2) throw std::invalid_argument("chi_square_gof: need k >= 2");
    double stat = 0.0, total = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw std::invalid_argument("chi_square_gof: expected cell <= 0");
        double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
        total += observed[i];
    }
    TestResult result;
    result.statistic = stat;
    result.n = static_cast<int>(std::llround(total));
    result.p_value = gamma_q((static_cast<double>(observed.size()) - 1.0) / 2.0, stat / 2.0);
    result.method = "asymptotic";
    return result;
}

TestResult chi_square_gof_uniform(const std::vector<double>& observed) {
    if (observed.size() < 2) throw std::invalid_argument("chi_square_gof: need k >= 2");
    double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    std::vector<double> expected(observed.size(), total / static_cast<double>(observed.size()));
    return chi_square_gof(observed, expected);
}

TestResult cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("cohens_d: need n >= 2");
    auto mean_var = [](const std::vector<double>& v) {
        double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double s2 = 0;
        for (double x : v) s2 += (x - m) * (x - m);
        return std::pair<double, double>{m, s2 / (v.size() - 1.0)};
    };
    auto [ma, va] = mean_var(a);
    auto [mb, vb] = mean_var(b);
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    if (pooled <= 0.0) throw std::invalid_argument("cohens_d: zero pooled variance");

    TestResult result;
    result.statistic = (ma - mb) / std::sqrt(pooled);
    result.n = static_cast<int>(a.size() + b.size());
    double t = result.statistic * std::sqrt(na * nb / (na + nb));
    result.p_value = t_two_sided(t, na + nb - 2.0);
    result.method = "asymptotic";
    return result;
}

}  // namespace obfkit::stats
