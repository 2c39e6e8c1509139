#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chorefair {

enum class DistributionKind { Uniform01, PiecewiseConstant };

// A non-atomic distribution on [0, 1] with a density bounded in [alpha, beta].
// Construct through uniform() or piecewise(); both validate.
class DistributionSpec {
public:
    static DistributionSpec uniform();

    // `breakpoints` is either the full list 0 = b_0 < b_1 < ... < b_k = 1
    // (k + 1 entries) or only the interior points (k - 1 entries).
    // Densities must be positive and integrate to 1 within 1e-12.
    static DistributionSpec piecewise(std::vector<double> breakpoints, std::vector<double> densities);

    DistributionKind kind() const { return kind_; }
    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const double> densities() const { return densities_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }

    double pdf(double x) const;
    double cdf(double x) const;

    bool operator==(const DistributionSpec&) const = default;

private:
    DistributionSpec() = default;

    DistributionKind kind_ = DistributionKind::Uniform01;
    std::vector<double> breakpoints_;  // always the full list, b_0 = 0 and b_k = 1
    std::vector<double> densities_;
    std::vector<double> cumulative_;   // CDF at each breakpoint
    double alpha_ = 1.0;
    double beta_ = 1.0;
    double mean_ = 0.5;
    double variance_ = 1.0 / 12.0;
};

// Returns x with F(x) = q. Throws std::invalid_argument for q outside [0, 1].
double inverse_cdf(const DistributionSpec& dist, double q);

// n x m grid of disutilities, entry (i, j) = d_i(j), all in [0, 1].
// Indices are 0-based throughout the library.
class DisutilityMatrix {
public:
    // Throws std::invalid_argument on ragged rows, empty input, or entries outside [0, 1].
    explicit DisutilityMatrix(const std::vector<std::vector<double>>& rows);
    DisutilityMatrix(std::size_t n, std::size_t m, std::vector<double> row_major);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    double operator()(std::size_t agent, std::size_t chore) const { return costs_[agent * m_ + chore]; }
    std::span<const double> row(std::size_t agent) const { return {costs_.data() + agent * m_, m_}; }
    std::span<const double> data() const { return costs_; }

    // Total disutility d_i(M), summed in chore order.
    double row_total(std::size_t agent) const;

    // True if sampling had to redraw zero or tied entries.
    bool perturbed() const { return perturbed_; }
    void set_perturbed(bool value) { perturbed_ = value; }

    std::vector<std::vector<double>> to_rows() const;

    bool operator==(const DisutilityMatrix& other) const {
        return n_ == other.n_ && m_ == other.m_ && costs_ == other.costs_;
    }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> costs_;
    bool perturbed_ = false;
};

// Draws an n x m instance of i.i.d. disutilities. Entry (i, j) is drawn from a
// counter-based stream keyed by (seed, i, j, attempt); zero or duplicated
// entries are redrawn with the next attempt index until all are positive and
// pairwise distinct. Requires n >= 2 and m >= 2.
DisutilityMatrix sample_instance(std::size_t n, std::size_t m, const DistributionSpec& dist, std::uint64_t seed);

namespace detail {
// Same as sample_instance but accepts n, m >= 1 (used by analytic checks
// that need degenerate shapes).
DisutilityMatrix sample_costs(std::size_t n, std::size_t m, const DistributionSpec& dist, std::uint64_t seed);
}  // namespace detail

}  // namespace chorefair
