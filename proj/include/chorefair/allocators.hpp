#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chorefair/core.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/matching.hpp"

namespace chorefair {

enum class Algorithm { CostMin, AlgDiv, TwoStage, PropSmall, PropMedium, Dispatcher };

std::string_view to_string(Algorithm algorithm);

struct AllocatorOptions {
    std::optional<double> tau;  // two_stage threshold; default 3 ln n / (beta n)
    double beta = 1.0;          // upper density bound of the sampling distribution
    double big_m_c = 10.0;      // dispatcher uses cost_minimizing once m >= C n ln n
    std::size_t alg_div_max_iterations = 300;
    double alg_div_step = 0.1;
    bool keep_graphs = false;  // copy matching graphs into the outcome
};

struct TwoStageParams {
    double tau = 0.0;
    std::size_t r = 0;                  // floor(m / n)
    double xi = 0.0;                    // r ln(r n) / n, diagnostic only
    std::vector<std::size_t> gap_set;   // agents with a 2 tau margin after stage 1
    std::vector<std::size_t> leftover;  // chores r n .. m-1
};

struct AllocatorOutcome {
    std::optional<Allocation> allocation;
    Algorithm algorithm = Algorithm::CostMin;
    Algorithm route = Algorithm::CostMin;  // the algorithm that produced `allocation`
    std::map<std::string, double> diagnostics;
    std::optional<TwoStageParams> two_stage;
    std::vector<BipartiteGraph> graphs;  // filled when AllocatorOptions::keep_graphs

    bool found() const { return allocation.has_value(); }
};

// Every chore goes to its cheapest agent (lowest index on ties).
Allocation cost_minimizing(const DisutilityMatrix& matrix);

// Balanced allocation for m = r n, r >= 2. Solves the balanced min-cost
// assignment (each agent replicated r times) and re-solves it with envy
// multipliers raised on violated pairs until the result is envy-free or the
// iteration budget runs out. Always balanced; EF is reported, not guaranteed.
AllocatorOutcome alg_div(const DisutilityMatrix& matrix, const AllocatorOptions& options = {});

// Two-stage matching: alg_div on the first r n chores, then a right-saturated
// 2-matching of the leftover chores onto agents with a 2 tau envy margin.
// Requires m >= 2n.
AllocatorOutcome two_stage(const DisutilityMatrix& matrix, const AllocatorOptions& options = {});

// Each agent may take only its favorite chore, and only if it costs at most
// d_i(M)/n; succeeds iff every chore is some agent's admissible favorite.
AllocatorOutcome prop_small(const DisutilityMatrix& matrix, const AllocatorOptions& options = {});

// Largest k >= 1 with k ln k <= n / 40.
std::size_t small_regime_limit(std::size_t n);

// Contiguous group sizes used by prop_medium: r = ceil(m / m0) groups whose
// sizes differ by at most one, larger groups first.
std::vector<std::size_t> prop_medium_group_sizes(std::size_t n, std::size_t m);

// prop_small on each contiguous group (threshold d_i(M^k)/n), union of the results.
AllocatorOutcome prop_medium(const DisutilityMatrix& matrix, const AllocatorOptions& options = {});

// m >= C n ln n: cost_minimizing; n | m and m >= 2n: alg_div; m >= 2n: two_stage;
// otherwise cost_minimizing. The result is returned even when it is not envy-free.
AllocatorOutcome dispatch_envy_free(const DisutilityMatrix& matrix, const AllocatorOptions& options = {});
// Tries prop_small first when m ln m <= n / 40, the envy-free dispatcher first
// when m >= 2n, and prop_medium first otherwise, then the remaining routes.
// Absent unless some route yields a proportional allocation.
AllocatorOutcome dispatch_proportional(const DisutilityMatrix& matrix, const AllocatorOptions& options = {});

// Selector names used on the command line and in experiment records.
enum class AllocatorChoice { CostMin, AlgDiv, TwoStage, PropSmall, PropMedium, EnvyFree, Proportional };

std::string_view to_string(AllocatorChoice choice);
// Throws std::invalid_argument for unknown names.
AllocatorChoice parse_allocator_choice(std::string_view name);
// True for choices whose target notion is envy-freeness.
bool targets_envy_freeness(AllocatorChoice choice);

AllocatorOutcome run_allocator(AllocatorChoice choice, const DisutilityMatrix& matrix,
                               const AllocatorOptions& options = {});

}  // namespace chorefair
