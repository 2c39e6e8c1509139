#pragma once

#include <cstdint>
#include <optional>

#include "chorefair/core.hpp"
#include "chorefair/instance.hpp"

namespace chorefair {

// Largest n^m the exact existence checkers will enumerate.
inline constexpr std::uint64_t kOracleEnumerationLimit = 100'000'000;

struct ExistenceResult {
    bool exists = false;
    std::optional<Allocation> witness;  // lexicographically first owner vector
};

// Exact decision by enumerating chore -> agent assignments with sound pruning.
// Throws std::domain_error when n^m > kOracleEnumerationLimit.
ExistenceResult exists_envy_free(const DisutilityMatrix& matrix);
ExistenceResult exists_proportional(const DisutilityMatrix& matrix);

}  // namespace chorefair
