#include "chorefair/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "chorefair/rng.hpp"

namespace chorefair {

namespace {

constexpr double kIntegralTolerance = 1e-12;

}  // namespace

DistributionSpec DistributionSpec::uniform() {
    DistributionSpec d;
    d.kind_ = DistributionKind::Uniform01;
    d.breakpoints_ = {0.0, 1.0};
    d.densities_ = {1.0};
    d.cumulative_ = {0.0, 1.0};
    return d;
}

DistributionSpec DistributionSpec::piecewise(std::vector<double> breakpoints, std::vector<double> densities) {
    if (densities.empty()) {
        throw std::invalid_argument("piecewise distribution needs at least one density");
    }
    if (breakpoints.size() + 1 == densities.size()) {
        breakpoints.insert(breakpoints.begin(), 0.0);
        breakpoints.push_back(1.0);
    }
    if (breakpoints.size() != densities.size() + 1) {
        throw std::invalid_argument("piecewise distribution: expected " + std::to_string(densities.size() + 1) +
                                    " breakpoints, got " + std::to_string(breakpoints.size()));
    }
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0) {
        throw std::invalid_argument("piecewise distribution must span exactly [0, 1]");
    }
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        if (!(breakpoints[k] < breakpoints[k + 1])) {
            throw std::invalid_argument("piecewise breakpoints must be strictly increasing");
        }
    }
    for (double f : densities) {
        if (!std::isfinite(f) || !(f > 0.0)) {
            throw std::invalid_argument("piecewise densities must be positive and finite");
        }
    }

    DistributionSpec d;
    d.kind_ = DistributionKind::PiecewiseConstant;
    d.cumulative_.assign(breakpoints.size(), 0.0);
    double first = 0.0;
    double second = 0.0;
    for (std::size_t k = 0; k < densities.size(); ++k) {
        const double a = breakpoints[k];
        const double b = breakpoints[k + 1];
        d.cumulative_[k + 1] = d.cumulative_[k] + densities[k] * (b - a);
        first += densities[k] * (b * b - a * a) / 2.0;
        second += densities[k] * (b * b * b - a * a * a) / 3.0;
    }
    if (std::abs(d.cumulative_.back() - 1.0) > kIntegralTolerance) {
        throw std::invalid_argument("piecewise densities integrate to " + std::to_string(d.cumulative_.back()) +
                                    ", not 1");
    }
    d.alpha_ = *std::min_element(densities.begin(), densities.end());
    d.beta_ = *std::max_element(densities.begin(), densities.end());
    d.mean_ = first;
    d.variance_ = second - first * first;
    d.breakpoints_ = std::move(breakpoints);
    d.densities_ = std::move(densities);
    return d;
}

double DistributionSpec::pdf(double x) const {
    if (x < 0.0 || x > 1.0) {
        return 0.0;
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t piece = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    piece = std::min(piece, densities_.size() - 1);
    return densities_[piece];
}

double DistributionSpec::cdf(double x) const {
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const std::size_t piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    return cumulative_[piece] + densities_[piece] * (x - breakpoints_[piece]);
}

double inverse_cdf(const DistributionSpec& dist, double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::invalid_argument("inverse_cdf: q must lie in [0, 1]");
    }
    if (dist.kind() == DistributionKind::Uniform01) {
        return q;
    }
    if (q == 0.0) {
        return 0.0;
    }
    if (q == 1.0) {
        return 1.0;
    }
    const auto bp = dist.breakpoints();
    const auto dens = dist.densities();
    // Find the first piece whose right-end CDF reaches q.
    double left_cdf = 0.0;
    for (std::size_t k = 0; k < dens.size(); ++k) {
        const double right_cdf = left_cdf + dens[k] * (bp[k + 1] - bp[k]);
        if (q <= right_cdf || k + 1 == dens.size()) {
            const double x = bp[k] + (q - left_cdf) / dens[k];
            return std::clamp(x, bp[k], bp[k + 1]);
        }
        left_cdf = right_cdf;
    }
    return 1.0;
}

DisutilityMatrix::DisutilityMatrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw std::invalid_argument("disutility matrix needs at least one agent and one chore");
    }
    n_ = rows.size();
    m_ = rows.front().size();
    costs_.reserve(n_ * m_);
    for (const auto& r : rows) {
        if (r.size() != m_) {
            throw std::invalid_argument("disutility matrix rows must all have the same length");
        }
        costs_.insert(costs_.end(), r.begin(), r.end());
    }
    for (double c : costs_) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("disutilities must lie in [0, 1]");
        }
    }
}

DisutilityMatrix::DisutilityMatrix(std::size_t n, std::size_t m, std::vector<double> row_major)
    : n_(n), m_(m), costs_(std::move(row_major)) {
    if (n_ == 0 || m_ == 0) {
        throw std::invalid_argument("disutility matrix needs at least one agent and one chore");
    }
    if (costs_.size() != n_ * m_) {
        throw std::invalid_argument("disutility matrix data size does not match n * m");
    }
    for (double c : costs_) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("disutilities must lie in [0, 1]");
        }
    }
}

double DisutilityMatrix::row_total(std::size_t agent) const {
    double total = 0.0;
    for (double c : row(agent)) {
        total += c;
    }
    return total;
}

std::vector<std::vector<double>> DisutilityMatrix::to_rows() const {
    std::vector<std::vector<double>> rows(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        auto r = row(i);
        rows[i].assign(r.begin(), r.end());
    }
    return rows;
}

namespace detail {

DisutilityMatrix sample_costs(std::size_t n, std::size_t m, const DistributionSpec& dist, std::uint64_t seed) {
    if (n == 0 || m == 0) {
        throw std::invalid_argument("sample_costs: n and m must be positive");
    }
    const std::size_t total = n * m;
    std::vector<double> costs(total);
    std::vector<std::uint64_t> attempt(total, 0);
    auto draw = [&](std::size_t idx) {
        const std::uint64_t key = hash_key(seed, {idx / m, idx % m, attempt[idx]});
        return inverse_cdf(dist, to_unit(key));
    };
    for (std::size_t idx = 0; idx < total; ++idx) {
        costs[idx] = draw(idx);
    }

    bool perturbed = false;
    std::vector<std::size_t> order(total);
    while (true) {
        std::vector<std::size_t> redo;
        for (std::size_t idx = 0; idx < total; ++idx) {
            if (costs[idx] == 0.0) {
                redo.push_back(idx);
            }
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return costs[a] != costs[b] ? costs[a] < costs[b] : a < b;
        });
        for (std::size_t k = 1; k < total; ++k) {
            if (costs[order[k]] == costs[order[k - 1]]) {
                redo.push_back(order[k]);  // keep the lowest index of each tie group
            }
        }
        if (redo.empty()) {
            break;
        }
        perturbed = true;
        for (std::size_t idx : redo) {
            ++attempt[idx];
            costs[idx] = draw(idx);
        }
    }
    DisutilityMatrix matrix(n, m, std::move(costs));
    matrix.set_perturbed(perturbed);
    return matrix;
}

}  // namespace detail

DisutilityMatrix sample_instance(std::size_t n, std::size_t m, const DistributionSpec& dist, std::uint64_t seed) {
    if (n < 2 || m < 2) {
        throw std::invalid_argument("sample_instance requires n >= 2 and m >= 2");
    }
    return detail::sample_costs(n, m, dist, seed);
}

}  // namespace chorefair
