#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chorefair/instance.hpp"

namespace chorefair {

// A partition of chores {0..m-1} into n bundles; empty bundles are allowed.
// Bundles are kept sorted so every bundle sum is taken in chore order.
class Allocation {
public:
    // Throws std::invalid_argument unless `bundles` partitions {0..m-1}.
    Allocation(std::size_t m, std::vector<std::vector<std::size_t>> bundles);

    // owners[j] = agent receiving chore j.
    static Allocation from_owners(std::size_t n, std::span<const std::size_t> owners);

    std::size_t n() const { return bundles_.size(); }
    std::size_t m() const { return m_; }
    std::span<const std::size_t> bundle(std::size_t agent) const { return bundles_[agent]; }
    const std::vector<std::vector<std::size_t>>& bundles() const { return bundles_; }
    std::vector<std::size_t> owners() const;

    bool balanced() const;

    bool operator==(const Allocation&) const = default;

private:
    std::size_t m_ = 0;
    std::vector<std::vector<std::size_t>> bundles_;
};

struct FairnessReport {
    bool envy_free = false;
    bool proportional = false;
    bool efx = false;
    std::optional<bool> mms_fair;  // absent when the instance is too large for exact MMS
    double max_envy = 0.0;         // max_{i,i'} d_i(A_i) - d_i(A_i'), clipped at 0
    double prop_violation = 0.0;   // max_i d_i(A_i) - d_i(M)/n, clipped at 0
};

// Largest n^m for which mms_share enumerates exactly.
inline constexpr std::uint64_t kMmsEnumerationLimit = 10'000'000;

// True when n^m <= limit (computed without overflow).
bool assignments_within(std::size_t n, std::size_t m, std::uint64_t limit);

double bundle_disutility(const DisutilityMatrix& matrix, std::size_t agent, std::span<const std::size_t> bundle);

// Fairness predicates compare with exact <=, no tolerance.
bool is_envy_free(const DisutilityMatrix& matrix, const Allocation& alloc);
bool is_proportional(const DisutilityMatrix& matrix, const Allocation& alloc);
bool is_efx(const DisutilityMatrix& matrix, const Allocation& alloc);

// Agent's maximin share for chores: min over n-partitions of the largest bundle
// cost. Throws std::domain_error when n^m exceeds kMmsEnumerationLimit.
double mms_share(const DisutilityMatrix& matrix, std::size_t agent);
bool mms_within_limit(std::size_t n, std::size_t m);
bool is_mms_fair(const DisutilityMatrix& matrix, const Allocation& alloc);

FairnessReport evaluate_fairness(const DisutilityMatrix& matrix, const Allocation& alloc, bool compute_mms = true);

}  // namespace chorefair
