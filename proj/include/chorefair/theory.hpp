#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "chorefair/instance.hpp"

namespace chorefair {

enum class CertificateKind { None, RepeatedFavorites, UnassignableChore };

struct NonExistenceCertificate {
    CertificateKind kind = CertificateKind::None;
    std::size_t repeated_favorites = 0;  // T, always filled by the EF certificate
    std::optional<std::size_t> chore;    // UnassignableChore only
    // UnassignableChore only: min_i d_i(chore) > m/n also holds.
    bool meets_ratio_threshold = false;

    bool fires() const { return kind != CertificateKind::None; }
};

// favorite[i] = argmin_j d_i(j), lowest index on ties.
std::vector<std::size_t> favorite_chores(const DisutilityMatrix& matrix);

// Number of chores that are the favorite of two or more agents.
std::size_t count_repeated_favorites(const DisutilityMatrix& matrix);

// Fires when T > 2(m - n). Needs positive disutilities and unique favorites
// (which sampling guarantees); without them it never fires.
NonExistenceCertificate ef_nonexistence_certificate(const DisutilityMatrix& matrix);

// Fires on the first chore j with d_i(j) > d_i(M)/n for every agent i.
NonExistenceCertificate prop_nonexistence_certificate(const DisutilityMatrix& matrix);

// E[T] = m (1 - (1 + (n-1)/m) (1 - 1/m)^(n-1)), the exact value for i.i.d. favorites.
double expected_repeated_favorites(std::size_t n, std::size_t m);

// m (1 - (1 + (n-1)/m) e^{-(n-1)/m}); never exceeds the exact value.
double expected_repeated_favorites_lower_bound(std::size_t n, std::size_t m);

// g(x) = x (1 + (1 + 1/x) e^{-1/x}) - 2; increasing, with its root at nu.
double nu_equation_residual(double x);

// Root of x (1 + (1 + 1/x) e^{-1/x}) = 2 by bisection on (0, 2].
double solve_nu();

// e^{-2 beta m}.
double prop_nonexistence_lower_bound(double beta, std::size_t m);

// Chernoff tails for a sum of independent [0, 1] variables with mean `mean`.
double chernoff_upper_tail(double delta, double mean);
double chernoff_lower_tail(double delta, double mean);

// n c^2 / 4.
double efron_stein_bound(std::size_t n, double c);

// Analytic constant c for the cost-minimizing route: 100 / (delta0^2 (mu - Var/2))
// with delta0 = Var / (2 mu). Informational only.
double cost_minimizing_constant(const DistributionSpec& dist);

struct VarianceCheck {
    std::size_t trials = 0;
    double mean = 0.0;
    double variance = 0.0;        // unbiased sample variance of T
    double standard_error = 0.0;  // of the variance estimate
    double bound = 0.0;           // n / 4
    bool pass = false;            // variance <= bound + 3 * standard_error
};

// Monte Carlo estimate of Var(T) over uniform instances. Requires trials >= 1000.
VarianceCheck efron_stein_variance_check(std::size_t n, std::size_t m, std::size_t trials, std::uint64_t seed);

}  // namespace chorefair
