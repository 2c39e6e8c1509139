#include "chorefair/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chorefair/rng.hpp"

namespace chorefair {

namespace {

bool has_strict_favorites(const DisutilityMatrix& matrix) {
    for (std::size_t i = 0; i < matrix.n(); ++i) {
        const auto row = matrix.row(i);
        const auto best = std::min_element(row.begin(), row.end());
        if (*best <= 0.0 || std::count(row.begin(), row.end(), *best) > 1) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<std::size_t> favorite_chores(const DisutilityMatrix& matrix) {
    std::vector<std::size_t> fav(matrix.n());
    for (std::size_t i = 0; i < matrix.n(); ++i) {
        const auto row = matrix.row(i);
        fav[i] = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
    }
    return fav;
}

std::size_t count_repeated_favorites(const DisutilityMatrix& matrix) {
    std::vector<std::size_t> fans(matrix.m(), 0);
    for (std::size_t j : favorite_chores(matrix)) {
        ++fans[j];
    }
    return static_cast<std::size_t>(std::count_if(fans.begin(), fans.end(), [](std::size_t c) { return c > 1; }));
}

NonExistenceCertificate ef_nonexistence_certificate(const DisutilityMatrix& matrix) {
    NonExistenceCertificate cert;
    cert.repeated_favorites = count_repeated_favorites(matrix);
    if (!has_strict_favorites(matrix)) {
        return cert;
    }
    const auto t = static_cast<long long>(cert.repeated_favorites);
    const long long slack = 2 * (static_cast<long long>(matrix.m()) - static_cast<long long>(matrix.n()));
    if (t > slack) {
        cert.kind = CertificateKind::RepeatedFavorites;
    }
    return cert;
}

NonExistenceCertificate prop_nonexistence_certificate(const DisutilityMatrix& matrix) {
    NonExistenceCertificate cert;
    cert.repeated_favorites = count_repeated_favorites(matrix);
    const double n = static_cast<double>(matrix.n());
    const double ratio = static_cast<double>(matrix.m()) / n;
    std::vector<double> share(matrix.n());
    for (std::size_t i = 0; i < matrix.n(); ++i) {
        share[i] = matrix.row_total(i) / n;
    }
    for (std::size_t j = 0; j < matrix.m(); ++j) {
        bool everyone_over = true;
        double cheapest = 1.0;
        for (std::size_t i = 0; i < matrix.n() && everyone_over; ++i) {
            everyone_over = matrix(i, j) > share[i];
            cheapest = std::min(cheapest, matrix(i, j));
        }
        if (everyone_over) {
            cert.kind = CertificateKind::UnassignableChore;
            cert.chore = j;
            cert.meets_ratio_threshold = cheapest > ratio;
            return cert;
        }
    }
    return cert;
}

double expected_repeated_favorites(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) {
        throw std::invalid_argument("expected_repeated_favorites needs n, m >= 1");
    }
    const double dn = static_cast<double>(n);
    const double dm = static_cast<double>(m);
    return dm * (1.0 - (1.0 + (dn - 1.0) / dm) * std::pow(1.0 - 1.0 / dm, dn - 1.0));
}

double expected_repeated_favorites_lower_bound(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) {
        throw std::invalid_argument("expected_repeated_favorites_lower_bound needs n, m >= 1");
    }
    const double x = (static_cast<double>(n) - 1.0) / static_cast<double>(m);
    return static_cast<double>(m) * (1.0 - (1.0 + x) * std::exp(-x));
}

double nu_equation_residual(double x) { return x * (1.0 + (1.0 + 1.0 / x) * std::exp(-1.0 / x)) - 2.0; }

double solve_nu() {
    // The residual is increasing in x: negative near 0, positive at 2.
    double lo = 1e-3;
    double hi = 2.0;
    while (true) {
        const double mid = lo + (hi - lo) / 2.0;
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (nu_equation_residual(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(nu_equation_residual(lo)) <= std::abs(nu_equation_residual(hi)) ? lo : hi;
}

double prop_nonexistence_lower_bound(double beta, std::size_t m) {
    return std::exp(-2.0 * beta * static_cast<double>(m));
}

double chernoff_upper_tail(double delta, double mean) {
    return std::exp(-delta * delta * mean / (2.0 + delta));
}

double chernoff_lower_tail(double delta, double mean) { return std::exp(-delta * delta * mean / 2.0); }

double efron_stein_bound(std::size_t n, double c) { return static_cast<double>(n) * c * c / 4.0; }

double cost_minimizing_constant(const DistributionSpec& dist) {
    const double mu = dist.mean();
    const double var = dist.variance();
    const double delta0 = 0.5 * var / mu;
    return 100.0 / (delta0 * delta0 * (mu - 0.5 * var));
}

VarianceCheck efron_stein_variance_check(std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed) {
    if (trials < 1000) {
        throw std::invalid_argument("efron_stein_variance_check needs at least 1000 trials");
    }
    const auto dist = DistributionSpec::uniform();
    std::vector<double> samples(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto matrix = detail::sample_costs(n, m, dist, hash_key(seed, {n, m, t}));
        samples[t] = static_cast<double>(count_repeated_favorites(matrix));
    }
    VarianceCheck out;
    out.trials = trials;
    const double count = static_cast<double>(trials);
    for (double x : samples) {
        out.mean += x;
    }
    out.mean /= count;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : samples) {
        const double d = x - out.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    out.variance = m2 / (count - 1.0);
    m2 /= count;
    m4 /= count;
    // Large-sample standard error of the sample variance.
    out.standard_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / count);
    out.bound = efron_stein_bound(n, 1.0);
    out.pass = out.variance <= out.bound + 3.0 * out.standard_error;
    return out;
}

}  // namespace chorefair
