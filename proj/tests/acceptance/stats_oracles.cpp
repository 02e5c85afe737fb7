#include "stats_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace tilekmc::test {

namespace {

// Regularized lower incomplete gamma via series expansion.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma via continued fraction (Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double stat, int dof) {
    return gamma_q(dof / 2.0, stat / 2.0);
}

double mann_whitney_greater_p(std::span<const double> a, std::span<const double> b) {
    const std::size_t n1 = a.size(), n2 = b.size();
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("empty sample");

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<std::size_t> order(pooled.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&pooled](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });

    // Average ranks with tie bookkeeping.
    std::vector<double> ranks(pooled.size());
    std::map<double, std::size_t> tie_counts;
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j + 1 < pooled.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        tie_counts[pooled[order[i]]] = j - i + 1;
        i = j + 1;
    }

    double rank_sum_a = 0.0;
    for (std::size_t k = 0; k < n1; ++k) rank_sum_a += ranks[k];
    const double u = rank_sum_a - static_cast<double>(n1) * (n1 + 1) / 2.0;

    const double n = static_cast<double>(n1 + n2);
    const double mean_u = static_cast<double>(n1) * n2 / 2.0;
    double tie_term = 0.0;
    for (const auto& [_, t] : tie_counts) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double var_u =
        static_cast<double>(n1) * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var_u <= 0.0) return 1.0; // all values tied: no evidence either way

    const double z = (u - mean_u - 0.5) / std::sqrt(var_u); // continuity corrected
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double purity(std::span<const int> labels, std::span<const bool> truth) {
    if (labels.size() != truth.size() || labels.empty())
        throw std::invalid_argument("purity arguments");
    std::map<int, std::pair<std::size_t, std::size_t>> counts; // label -> (false, true)
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto& c = counts[labels[i]];
        if (truth[i])
            ++c.second;
        else
            ++c.first;
    }
    std::size_t agree = 0;
    for (const auto& [_, c] : counts) agree += std::max(c.first, c.second);
    return static_cast<double>(agree) / static_cast<double>(labels.size());
}

} // namespace tilekmc::test
