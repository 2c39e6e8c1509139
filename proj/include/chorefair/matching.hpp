#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace chorefair {

using Edge = std::pair<std::size_t, std::size_t>;  // (left, right), 0-based

// Bipartite graph with left vertices {0..n_left-1} and right vertices {0..n_right-1}.
class BipartiteGraph {
public:
    // Throws std::invalid_argument for out-of-range endpoints or duplicate edges.
    BipartiteGraph(std::size_t n_left, std::size_t n_right, std::vector<Edge> edges);

    std::size_t n_left() const { return n_left_; }
    std::size_t n_right() const { return n_right_; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_edge(std::size_t left, std::size_t right) const;

    // Neighbours of each left vertex, ascending.
    std::vector<std::vector<std::size_t>> left_adjacency() const;
    std::vector<std::size_t> left_degrees() const;
    std::vector<std::size_t> right_degrees() const;

private:
    std::size_t n_left_;
    std::size_t n_right_;
    std::vector<Edge> edges_;  // sorted
};

// r-matching: every left vertex in at most r pairs, every right vertex in at most one.
struct Matching {
    std::vector<Edge> pairs;  // sorted by right vertex
    std::size_t r = 1;

    std::size_t size() const { return pairs.size(); }
    bool saturates_right(std::size_t n_right) const { return pairs.size() == n_right; }
};

// Throws std::logic_error if `matching` breaks its capacity or edge-subset invariants.
void validate_matching(const BipartiteGraph& g, const Matching& matching);

// Maximum-cardinality matching (Hopcroft-Karp); lower indices are preferred on ties.
Matching max_matching(const BipartiteGraph& g);

// Right-saturated 2-matching via two copies of every left vertex, or nullopt.
std::optional<Matching> right_saturated_2_matching(const BipartiteGraph& g);

// For graphs whose left vertices all have degree <= 1: each right vertex takes
// its unique incident edge. nullopt if some right vertex is isolated.
// Throws std::invalid_argument if a left vertex has degree >= 2.
std::optional<Matching> right_saturated_matching_via_unique_left_degree(const BipartiteGraph& g);

struct Assignment {
    std::vector<std::size_t> column_of_row;
    double cost = 0.0;  // sum of cost[i][column_of_row[i]] in row order
};

// Minimum-cost perfect matching on a square grid (Hungarian method, O(n^3)).
// Throws std::invalid_argument for non-square grids or non-finite entries.
Assignment min_cost_perfect_matching(const std::vector<std::vector<double>>& cost);

// Erdos-Renyi bipartite sample G(n_left, n_right, p); edge (l, r) is decided by
// a counter-based draw keyed on (seed, l, r).
BipartiteGraph sample_random_bipartite(std::size_t n_left, std::size_t n_right, double p, std::uint64_t seed);

}  // namespace chorefair
