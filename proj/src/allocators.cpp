#include "chorefair/allocators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "chorefair/theory.hpp"

namespace chorefair {

namespace {

// Columns [begin, end) of `matrix` as a standalone instance.
DisutilityMatrix select_chores(const DisutilityMatrix& matrix, std::size_t begin, std::size_t end) {
    const std::size_t width = end - begin;
    std::vector<double> data;
    data.reserve(matrix.n() * width);
    for (std::size_t i = 0; i < matrix.n(); ++i) {
        const auto row = matrix.row(i);
        data.insert(data.end(), row.begin() + static_cast<std::ptrdiff_t>(begin),
                    row.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return DisutilityMatrix(matrix.n(), width, std::move(data));
}

// cost[i][k] = d_i(A_k) from an owner vector; sums run in chore order.
std::vector<double> bundle_cost_table(const DisutilityMatrix& matrix, const std::vector<std::size_t>& owners) {
    const std::size_t n = matrix.n();
    std::vector<double> cost(n * n, 0.0);
    for (std::size_t j = 0; j < owners.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            cost[i * n + owners[j]] += matrix(i, j);
        }
    }
    return cost;
}

double total_envy(const std::vector<double>& cost, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            total += std::max(0.0, cost[i * n + i] - cost[i * n + k]);
        }
    }
    return total;
}

void note_verdict(AllocatorOutcome& outcome, const DisutilityMatrix& matrix) {
    if (outcome.allocation) {
        outcome.diagnostics["verified_envy_free"] = is_envy_free(matrix, *outcome.allocation) ? 1.0 : 0.0;
        outcome.diagnostics["verified_proportional"] = is_proportional(matrix, *outcome.allocation) ? 1.0 : 0.0;
    }
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::CostMin: return "CostMin";
        case Algorithm::AlgDiv: return "AlgDiv";
        case Algorithm::TwoStage: return "TwoStage";
        case Algorithm::PropSmall: return "PropSmall";
        case Algorithm::PropMedium: return "PropMedium";
        case Algorithm::Dispatcher: return "Dispatcher";
    }
    return "Unknown";
}

Allocation cost_minimizing(const DisutilityMatrix& matrix) {
    std::vector<std::size_t> owners(matrix.m());
    for (std::size_t j = 0; j < matrix.m(); ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < matrix.n(); ++i) {
            if (matrix(i, j) < matrix(best, j)) {
                best = i;
            }
        }
        owners[j] = best;
    }
    return Allocation::from_owners(matrix.n(), owners);
}

AllocatorOutcome alg_div(const DisutilityMatrix& matrix, const AllocatorOptions& options) {
    const std::size_t n = matrix.n();
    const std::size_t m = matrix.m();
    if (m % n != 0 || m / n < 2) {
        throw std::invalid_argument("alg_div needs m = r n with r >= 2 (n = " + std::to_string(n) +
                                    ", m = " + std::to_string(m) + ")");
    }
    const std::size_t r = m / n;

    // penalty[k * n + a]: multiplier on "k envies a".
    std::vector<double> penalty(n * n, 0.0);
    std::vector<std::vector<double>> grid(m, std::vector<double>(m));
    std::vector<std::size_t> best_owners;
    double best_envy = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool envy_free = false;

    const std::size_t budget = std::max<std::size_t>(1, options.alg_div_max_iterations);
    for (std::size_t it = 0; it < budget && !envy_free; ++it) {
        ++iterations;
        // Weight of giving chore j to agent a: its own cost, scaled by a's
        // outgoing multipliers, minus what envious agents k would feel about it.
        for (std::size_t a = 0; a < n; ++a) {
            double own_scale = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                own_scale += penalty[a * n + i];
            }
            for (std::size_t j = 0; j < m; ++j) {
                double w = matrix(a, j) * own_scale;
                for (std::size_t k = 0; k < n; ++k) {
                    if (penalty[k * n + a] != 0.0) {
                        w -= penalty[k * n + a] * matrix(k, j);
                    }
                }
                for (std::size_t s = 0; s < r; ++s) {
                    grid[a * r + s][j] = w;
                }
            }
        }
        const Assignment assignment = min_cost_perfect_matching(grid);
        std::vector<std::size_t> owners(m);
        for (std::size_t row = 0; row < m; ++row) {
            owners[assignment.column_of_row[row]] = row / r;
        }

        const auto cost = bundle_cost_table(matrix, owners);
        const double envy = total_envy(cost, n);
        if (envy < best_envy) {
            best_envy = envy;
            best_owners = owners;
        }
        envy_free = is_envy_free(matrix, Allocation::from_owners(n, owners));
        if (envy_free) {
            best_owners = owners;
            best_envy = 0.0;
            break;
        }
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t a = 0; a < n; ++a) {
                if (a != k && cost[k * n + k] > cost[k * n + a]) {
                    penalty[k * n + a] += options.alg_div_step;
                }
            }
        }
    }

    AllocatorOutcome outcome;
    outcome.algorithm = Algorithm::AlgDiv;
    outcome.route = Algorithm::AlgDiv;
    outcome.allocation = Allocation::from_owners(n, best_owners);
    double max_own = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_own = std::max(max_own, bundle_disutility(matrix, i, outcome.allocation->bundle(i)));
    }
    outcome.diagnostics["iterations"] = static_cast<double>(iterations);
    outcome.diagnostics["max_own_cost"] = max_own;
    outcome.diagnostics["total_envy"] = best_envy;
    outcome.diagnostics["balanced"] = outcome.allocation->balanced() ? 1.0 : 0.0;
    note_verdict(outcome, matrix);
    return outcome;
}

AllocatorOutcome two_stage(const DisutilityMatrix& matrix, const AllocatorOptions& options) {
    const std::size_t n = matrix.n();
    const std::size_t m = matrix.m();
    if (m < 2 * n) {
        throw std::invalid_argument("two_stage needs m >= 2n");
    }
    TwoStageParams params;
    params.r = m / n;
    const double dn = static_cast<double>(n);
    params.tau = options.tau.value_or(3.0 * std::log(dn) / (options.beta * dn));
    params.xi = static_cast<double>(params.r) * std::log(static_cast<double>(params.r * n)) / dn;
    const std::size_t stage_one_size = params.r * n;

    AllocatorOutcome stage_one = alg_div(select_chores(matrix, 0, stage_one_size), options);
    const Allocation& first = *stage_one.allocation;

    for (std::size_t i = 0; i < n; ++i) {
        const double own = bundle_disutility(matrix, i, first.bundle(i));
        double cheapest_other = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            if (k != i) {
                cheapest_other = std::min(cheapest_other, bundle_disutility(matrix, i, first.bundle(k)));
            }
        }
        if (own <= cheapest_other - 2.0 * params.tau) {
            params.gap_set.push_back(i);
        }
    }
    for (std::size_t j = stage_one_size; j < m; ++j) {
        params.leftover.push_back(j);
    }

    std::vector<Edge> edges;
    for (std::size_t l = 0; l < params.gap_set.size(); ++l) {
        for (std::size_t r = 0; r < params.leftover.size(); ++r) {
            if (matrix(params.gap_set[l], params.leftover[r]) <= params.tau) {
                edges.emplace_back(l, r);
            }
        }
    }
    BipartiteGraph graph(params.gap_set.size(), params.leftover.size(), std::move(edges));
    const auto matching = right_saturated_2_matching(graph);

    AllocatorOutcome outcome;
    outcome.algorithm = Algorithm::TwoStage;
    outcome.route = Algorithm::TwoStage;
    outcome.diagnostics["stage1_envy_free"] = stage_one.diagnostics.at("verified_envy_free");
    outcome.diagnostics["stage1_iterations"] = stage_one.diagnostics.at("iterations");
    outcome.diagnostics["stage1_max_own_cost"] = stage_one.diagnostics.at("max_own_cost");
    outcome.diagnostics["tau"] = params.tau;
    outcome.diagnostics["xi"] = params.xi;
    outcome.diagnostics["r"] = static_cast<double>(params.r);
    outcome.diagnostics["gap_set_size"] = static_cast<double>(params.gap_set.size());
    outcome.diagnostics["leftover_size"] = static_cast<double>(params.leftover.size());
    outcome.diagnostics["graph_edges"] = static_cast<double>(graph.edges().size());
    outcome.diagnostics["matching_found"] = matching ? 1.0 : 0.0;
    if (matching) {
        std::vector<std::vector<std::size_t>> bundles = first.bundles();
        for (const auto& [l, r] : matching->pairs) {
            bundles[params.gap_set[l]].push_back(params.leftover[r]);
        }
        outcome.allocation = Allocation(m, std::move(bundles));
    }
    if (options.keep_graphs) {
        outcome.graphs.push_back(std::move(graph));
    }
    outcome.two_stage = std::move(params);
    note_verdict(outcome, matrix);
    return outcome;
}

AllocatorOutcome prop_small(const DisutilityMatrix& matrix, const AllocatorOptions& options) {
    const std::size_t n = matrix.n();
    const auto favorites = favorite_chores(matrix);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = favorites[i];
        if (matrix(i, j) <= matrix.row_total(i) / static_cast<double>(n)) {
            edges.emplace_back(i, j);
        }
    }
    BipartiteGraph graph(n, matrix.m(), std::move(edges));
    const auto matching = right_saturated_matching_via_unique_left_degree(graph);

    AllocatorOutcome outcome;
    outcome.algorithm = Algorithm::PropSmall;
    outcome.route = Algorithm::PropSmall;
    const auto right_deg = graph.right_degrees();
    outcome.diagnostics["graph_edges"] = static_cast<double>(graph.edges().size());
    outcome.diagnostics["isolated_chores"] =
        static_cast<double>(std::count(right_deg.begin(), right_deg.end(), std::size_t{0}));
    outcome.diagnostics["matching_found"] = matching ? 1.0 : 0.0;
    if (matching) {
        std::vector<std::vector<std::size_t>> bundles(n);
        for (const auto& [agent, chore] : matching->pairs) {
            bundles[agent].push_back(chore);
        }
        outcome.allocation = Allocation(matrix.m(), std::move(bundles));
    }
    if (options.keep_graphs) {
        outcome.graphs.push_back(std::move(graph));
    }
    note_verdict(outcome, matrix);
    return outcome;
}

std::size_t small_regime_limit(std::size_t n) {
    const double budget = static_cast<double>(n) / 40.0;
    std::size_t k = 1;
    while (static_cast<double>(k + 1) * std::log(static_cast<double>(k + 1)) <= budget) {
        ++k;
    }
    return k;
}

std::vector<std::size_t> prop_medium_group_sizes(std::size_t n, std::size_t m) {
    const std::size_t m0 = small_regime_limit(n);
    const std::size_t groups = (m + m0 - 1) / m0;
    std::vector<std::size_t> sizes(groups, m / groups);
    for (std::size_t k = 0; k < m % groups; ++k) {
        ++sizes[k];
    }
    return sizes;
}

AllocatorOutcome prop_medium(const DisutilityMatrix& matrix, const AllocatorOptions& options) {
    const auto sizes = prop_medium_group_sizes(matrix.n(), matrix.m());
    AllocatorOutcome outcome;
    outcome.algorithm = Algorithm::PropMedium;
    outcome.route = Algorithm::PropMedium;
    outcome.diagnostics["m0"] = static_cast<double>(small_regime_limit(matrix.n()));
    outcome.diagnostics["groups"] = static_cast<double>(sizes.size());

    std::vector<std::vector<std::size_t>> bundles(matrix.n());
    std::size_t begin = 0;
    std::size_t succeeded = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        const std::size_t end = begin + sizes[k];
        AllocatorOutcome part = prop_small(select_chores(matrix, begin, end), options);
        outcome.diagnostics["group_" + std::to_string(k) + "_success"] = part.found() ? 1.0 : 0.0;
        if (part.found()) {
            ++succeeded;
            for (std::size_t i = 0; i < matrix.n(); ++i) {
                for (std::size_t c : part.allocation->bundle(i)) {
                    bundles[i].push_back(begin + c);
                }
            }
        }
        for (auto& g : part.graphs) {
            outcome.graphs.push_back(std::move(g));
        }
        begin = end;
    }
    outcome.diagnostics["groups_succeeded"] = static_cast<double>(succeeded);
    if (succeeded == sizes.size()) {
        outcome.allocation = Allocation(matrix.m(), std::move(bundles));
    }
    note_verdict(outcome, matrix);
    return outcome;
}

AllocatorOutcome dispatch_envy_free(const DisutilityMatrix& matrix, const AllocatorOptions& options) {
    const std::size_t n = matrix.n();
    const std::size_t m = matrix.m();
    const double dn = static_cast<double>(n);
    AllocatorOutcome outcome;
    if (static_cast<double>(m) >= options.big_m_c * dn * std::log(dn)) {
        outcome.allocation = cost_minimizing(matrix);
        outcome.route = Algorithm::CostMin;
    } else if (m % n == 0 && m >= 2 * n) {
        outcome = alg_div(matrix, options);
    } else if (m >= 2 * n) {
        outcome = two_stage(matrix, options);
    } else {
        outcome.allocation = cost_minimizing(matrix);
        outcome.route = Algorithm::CostMin;
    }
    outcome.algorithm = Algorithm::Dispatcher;
    outcome.diagnostics["route"] = static_cast<double>(outcome.route);
    note_verdict(outcome, matrix);
    return outcome;
}

AllocatorOutcome dispatch_proportional(const DisutilityMatrix& matrix, const AllocatorOptions& options) {
    const std::size_t n = matrix.n();
    const std::size_t m = matrix.m();
    const double dm = static_cast<double>(m);

    enum class Route { Small, EnvyFree, Medium };
    std::array<Route, 3> order{};
    if (dm * std::log(dm) <= static_cast<double>(n) / 40.0) {
        order = {Route::Small, Route::Medium, Route::EnvyFree};
    } else if (m >= 2 * n) {
        order = {Route::EnvyFree, Route::Small, Route::Medium};
    } else {
        order = {Route::Medium, Route::Small, Route::EnvyFree};
    }

    std::optional<AllocatorOutcome> primary;
    Algorithm first_route = Algorithm::Dispatcher;
    std::size_t attempts = 0;
    for (Route route : order) {
        ++attempts;
        AllocatorOutcome candidate;
        switch (route) {
            case Route::Small: candidate = prop_small(matrix, options); break;
            case Route::Medium: candidate = prop_medium(matrix, options); break;
            case Route::EnvyFree: candidate = dispatch_envy_free(matrix, options); break;
        }
        const bool ok = candidate.found() && is_proportional(matrix, *candidate.allocation);
        if (!primary) {
            primary = candidate;
            first_route = candidate.route;
        }
        if (ok) {
            primary = std::move(candidate);
            break;
        }
    }
    AllocatorOutcome outcome = std::move(*primary);
    if (outcome.found() && !is_proportional(matrix, *outcome.allocation)) {
        outcome.allocation.reset();
        outcome.diagnostics.erase("verified_envy_free");
        outcome.diagnostics.erase("verified_proportional");
    }
    outcome.algorithm = Algorithm::Dispatcher;
    outcome.diagnostics["attempts"] = static_cast<double>(attempts);
    outcome.diagnostics["first_route"] = static_cast<double>(first_route);
    outcome.diagnostics["route"] = static_cast<double>(outcome.route);
    note_verdict(outcome, matrix);
    return outcome;
}

std::string_view to_string(AllocatorChoice choice) {
    switch (choice) {
        case AllocatorChoice::CostMin: return "costmin";
        case AllocatorChoice::AlgDiv: return "algdiv";
        case AllocatorChoice::TwoStage: return "twostage";
        case AllocatorChoice::PropSmall: return "propsmall";
        case AllocatorChoice::PropMedium: return "propmedium";
        case AllocatorChoice::EnvyFree: return "ef";
        case AllocatorChoice::Proportional: return "prop";
    }
    return "unknown";
}

AllocatorChoice parse_allocator_choice(std::string_view name) {
    for (auto c : {AllocatorChoice::CostMin, AllocatorChoice::AlgDiv, AllocatorChoice::TwoStage,
                   AllocatorChoice::PropSmall, AllocatorChoice::PropMedium, AllocatorChoice::EnvyFree,
                   AllocatorChoice::Proportional}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw std::invalid_argument("unknown allocator '" + std::string(name) + "'");
}

bool targets_envy_freeness(AllocatorChoice choice) {
    switch (choice) {
        case AllocatorChoice::PropSmall:
        case AllocatorChoice::PropMedium:
        case AllocatorChoice::Proportional: return false;
        default: return true;
    }
}

AllocatorOutcome run_allocator(AllocatorChoice choice, const DisutilityMatrix& matrix,
                               const AllocatorOptions& options) {
    switch (choice) {
        case AllocatorChoice::CostMin: {
            AllocatorOutcome outcome;
            outcome.allocation = cost_minimizing(matrix);
            note_verdict(outcome, matrix);
            return outcome;
        }
        case AllocatorChoice::AlgDiv: return alg_div(matrix, options);
        case AllocatorChoice::TwoStage: return two_stage(matrix, options);
        case AllocatorChoice::PropSmall: return prop_small(matrix, options);
        case AllocatorChoice::PropMedium: return prop_medium(matrix, options);
        case AllocatorChoice::EnvyFree: return dispatch_envy_free(matrix, options);
        case AllocatorChoice::Proportional: return dispatch_proportional(matrix, options);
    }
    throw std::invalid_argument("unknown allocator");
}

}  // namespace chorefair
