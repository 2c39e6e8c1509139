#include "chorefair/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace chorefair {

namespace {

void check_dimensions(const DisutilityMatrix& matrix, const Allocation& alloc) {
    if (matrix.n() != alloc.n() || matrix.m() != alloc.m()) {
        throw std::invalid_argument("allocation is " + std::to_string(alloc.n()) + "x" + std::to_string(alloc.m()) +
                                    " but instance is " + std::to_string(matrix.n()) + "x" +
                                    std::to_string(matrix.m()));
    }
}

// cost[i][k] = d_i(A_k)
std::vector<std::vector<double>> bundle_costs(const DisutilityMatrix& matrix, const Allocation& alloc) {
    const std::size_t n = alloc.n();
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            cost[i][k] = bundle_disutility(matrix, i, alloc.bundle(k));
        }
    }
    return cost;
}

// Largest d_i(A_i \ {c}) over c in A_i, each sum re-taken in chore order.
double worst_removal(const DisutilityMatrix& matrix, std::size_t agent, std::span<const std::size_t> bundle) {
    double worst = 0.0;
    for (std::size_t skip = 0; skip < bundle.size(); ++skip) {
        double s = 0.0;
        for (std::size_t k = 0; k < bundle.size(); ++k) {
            if (k != skip) {
                s += matrix(agent, bundle[k]);
            }
        }
        worst = std::max(worst, s);
    }
    return worst;
}

struct MmsSearch {
    std::span<const double> costs;  // sorted descending
    std::vector<double> bins;
    double best;

    void place(std::size_t j, double current_max) {
        if (current_max >= best) {
            return;
        }
        if (j == costs.size()) {
            best = current_max;
            return;
        }
        bool tried_empty = false;
        for (std::size_t b = 0; b < bins.size(); ++b) {
            if (bins[b] == 0.0) {
                // Empty bins are interchangeable.
                if (tried_empty) {
                    continue;
                }
                tried_empty = true;
            }
            const double before = bins[b];
            bins[b] += costs[j];
            place(j + 1, std::max(current_max, bins[b]));
            bins[b] = before;
        }
    }
};

}  // namespace

Allocation::Allocation(std::size_t m, std::vector<std::vector<std::size_t>> bundles)
    : m_(m), bundles_(std::move(bundles)) {
    if (bundles_.empty()) {
        throw std::invalid_argument("allocation needs at least one bundle");
    }
    std::vector<bool> seen(m_, false);
    std::size_t count = 0;
    for (auto& b : bundles_) {
        std::sort(b.begin(), b.end());
        for (std::size_t c : b) {
            if (c >= m_) {
                throw std::invalid_argument("chore index " + std::to_string(c) + " out of range");
            }
            if (seen[c]) {
                throw std::invalid_argument("chore " + std::to_string(c) + " appears in more than one bundle");
            }
            seen[c] = true;
            ++count;
        }
    }
    if (count != m_) {
        throw std::invalid_argument("allocation leaves " + std::to_string(m_ - count) + " chores unassigned");
    }
}

Allocation Allocation::from_owners(std::size_t n, std::span<const std::size_t> owners) {
    std::vector<std::vector<std::size_t>> bundles(n);
    for (std::size_t j = 0; j < owners.size(); ++j) {
        if (owners[j] >= n) {
            throw std::invalid_argument("owner index out of range");
        }
        bundles[owners[j]].push_back(j);
    }
    return Allocation(owners.size(), std::move(bundles));
}

std::vector<std::size_t> Allocation::owners() const {
    std::vector<std::size_t> out(m_);
    for (std::size_t i = 0; i < bundles_.size(); ++i) {
        for (std::size_t c : bundles_[i]) {
            out[c] = i;
        }
    }
    return out;
}

bool Allocation::balanced() const {
    return std::all_of(bundles_.begin(), bundles_.end(),
                       [&](const auto& b) { return b.size() == bundles_.front().size(); });
}

double bundle_disutility(const DisutilityMatrix& matrix, std::size_t agent, std::span<const std::size_t> bundle) {
    if (agent >= matrix.n()) {
        throw std::out_of_range("agent index out of range");
    }
    double total = 0.0;
    for (std::size_t c : bundle) {
        if (c >= matrix.m()) {
            throw std::out_of_range("chore index out of range");
        }
        total += matrix(agent, c);
    }
    return total;
}

bool is_envy_free(const DisutilityMatrix& matrix, const Allocation& alloc) {
    check_dimensions(matrix, alloc);
    for (std::size_t i = 0; i < alloc.n(); ++i) {
        const double own = bundle_disutility(matrix, i, alloc.bundle(i));
        for (std::size_t k = 0; k < alloc.n(); ++k) {
            if (k != i && own > bundle_disutility(matrix, i, alloc.bundle(k))) {
                return false;
            }
        }
    }
    return true;
}

bool is_proportional(const DisutilityMatrix& matrix, const Allocation& alloc) {
    check_dimensions(matrix, alloc);
    const double n = static_cast<double>(alloc.n());
    for (std::size_t i = 0; i < alloc.n(); ++i) {
        if (bundle_disutility(matrix, i, alloc.bundle(i)) > matrix.row_total(i) / n) {
            return false;
        }
    }
    return true;
}

bool is_efx(const DisutilityMatrix& matrix, const Allocation& alloc) {
    check_dimensions(matrix, alloc);
    for (std::size_t i = 0; i < alloc.n(); ++i) {
        const double reduced = worst_removal(matrix, i, alloc.bundle(i));
        for (std::size_t k = 0; k < alloc.n(); ++k) {
            if (k != i && reduced > bundle_disutility(matrix, i, alloc.bundle(k))) {
                return false;
            }
        }
    }
    return true;
}

bool assignments_within(std::size_t n, std::size_t m, std::uint64_t limit) {
    std::uint64_t count = 1;
    for (std::size_t j = 0; j < m; ++j) {
        if (n != 0 && count > limit / n) {
            return false;
        }
        count *= n;
    }
    return count <= limit;
}

bool mms_within_limit(std::size_t n, std::size_t m) { return assignments_within(n, m, kMmsEnumerationLimit); }

double mms_share(const DisutilityMatrix& matrix, std::size_t agent) {
    if (agent >= matrix.n()) {
        throw std::out_of_range("agent index out of range");
    }
    if (!mms_within_limit(matrix.n(), matrix.m())) {
        throw std::domain_error("mms_share: n^m exceeds the exact enumeration limit");
    }
    std::vector<double> costs(matrix.row(agent).begin(), matrix.row(agent).end());
    std::sort(costs.begin(), costs.end(), std::greater<>());
    MmsSearch search{costs, std::vector<double>(matrix.n(), 0.0), std::numeric_limits<double>::infinity()};
    search.place(0, 0.0);
    return search.best;
}

bool is_mms_fair(const DisutilityMatrix& matrix, const Allocation& alloc) {
    check_dimensions(matrix, alloc);
    for (std::size_t i = 0; i < alloc.n(); ++i) {
        if (bundle_disutility(matrix, i, alloc.bundle(i)) > mms_share(matrix, i)) {
            return false;
        }
    }
    return true;
}

FairnessReport evaluate_fairness(const DisutilityMatrix& matrix, const Allocation& alloc, bool compute_mms) {
    check_dimensions(matrix, alloc);
    const auto cost = bundle_costs(matrix, alloc);
    const std::size_t n = alloc.n();
    FairnessReport report;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k != i) {
                report.max_envy = std::max(report.max_envy, cost[i][i] - cost[i][k]);
            }
        }
        report.prop_violation =
            std::max(report.prop_violation, cost[i][i] - matrix.row_total(i) / static_cast<double>(n));
    }
    report.envy_free = report.max_envy == 0.0;
    report.proportional = report.prop_violation == 0.0;
    report.efx = is_efx(matrix, alloc);
    if (compute_mms && mms_within_limit(matrix.n(), matrix.m())) {
        report.mms_fair = is_mms_fair(matrix, alloc);
    }
    return report;
}

}  // namespace chorefair
