#include "chorefair/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "chorefair/rng.hpp"

namespace chorefair {

namespace {

constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

// Hopcroft-Karp over an explicit adjacency list. Returns match_of_right.
class HopcroftKarp {
public:
    HopcroftKarp(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right)
        : adj_(adj),
          match_left_(adj.size(), kUnmatched),
          match_right_(n_right, kUnmatched),
          layer_(adj.size(), 0),
          next_(adj.size(), 0) {}

    std::vector<std::size_t> run() {
        while (bfs()) {
            std::fill(next_.begin(), next_.end(), 0);
            for (std::size_t u = 0; u < adj_.size(); ++u) {
                if (match_left_[u] == kUnmatched) {
                    dfs(u);
                }
            }
        }
        return match_right_;
    }

private:
    bool bfs() {
        std::vector<std::size_t> queue;
        queue.reserve(adj_.size());
        for (std::size_t u = 0; u < adj_.size(); ++u) {
            if (match_left_[u] == kUnmatched) {
                layer_[u] = 0;
                queue.push_back(u);
            } else {
                layer_[u] = kUnmatched;
            }
        }
        bool found = false;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t u = queue[head];
            for (std::size_t v : adj_[u]) {
                const std::size_t w = match_right_[v];
                if (w == kUnmatched) {
                    found = true;
                } else if (layer_[w] == kUnmatched) {
                    layer_[w] = layer_[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t u) {
        for (; next_[u] < adj_[u].size(); ++next_[u]) {
            const std::size_t v = adj_[u][next_[u]];
            const std::size_t w = match_right_[v];
            if (w == kUnmatched || (layer_[w] == layer_[u] + 1 && dfs(w))) {
                match_left_[u] = v;
                match_right_[v] = u;
                ++next_[u];
                return true;
            }
        }
        layer_[u] = kUnmatched;
        return false;
    }

    const std::vector<std::vector<std::size_t>>& adj_;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<std::size_t> layer_;
    std::vector<std::size_t> next_;
};

Matching from_match_of_right(const std::vector<std::size_t>& match_right, std::size_t r, std::size_t copies) {
    Matching m;
    m.r = r;
    for (std::size_t v = 0; v < match_right.size(); ++v) {
        if (match_right[v] != kUnmatched) {
            m.pairs.emplace_back(match_right[v] / copies, v);
        }
    }
    return m;
}

}  // namespace

BipartiteGraph::BipartiteGraph(std::size_t n_left, std::size_t n_right, std::vector<Edge> edges)
    : n_left_(n_left), n_right_(n_right), edges_(std::move(edges)) {
    for (const auto& [l, r] : edges_) {
        if (l >= n_left_ || r >= n_right_) {
            throw std::invalid_argument("edge (" + std::to_string(l) + ", " + std::to_string(r) + ") out of range");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw std::invalid_argument("duplicate edge in bipartite graph");
    }
}

bool BipartiteGraph::has_edge(std::size_t left, std::size_t right) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{left, right});
}

std::vector<std::vector<std::size_t>> BipartiteGraph::left_adjacency() const {
    std::vector<std::vector<std::size_t>> adj(n_left_);
    for (const auto& [l, r] : edges_) {
        adj[l].push_back(r);  // edges_ is sorted, so each list is ascending
    }
    return adj;
}

std::vector<std::size_t> BipartiteGraph::left_degrees() const {
    std::vector<std::size_t> deg(n_left_, 0);
    for (const auto& e : edges_) {
        ++deg[e.first];
    }
    return deg;
}

std::vector<std::size_t> BipartiteGraph::right_degrees() const {
    std::vector<std::size_t> deg(n_right_, 0);
    for (const auto& e : edges_) {
        ++deg[e.second];
    }
    return deg;
}

void validate_matching(const BipartiteGraph& g, const Matching& matching) {
    std::vector<std::size_t> left_use(g.n_left(), 0);
    std::vector<std::size_t> right_use(g.n_right(), 0);
    for (const auto& [l, r] : matching.pairs) {
        if (l >= g.n_left() || r >= g.n_right() || !g.has_edge(l, r)) {
            throw std::logic_error("matching uses an edge that is not in the graph");
        }
        if (++left_use[l] > matching.r) {
            throw std::logic_error("matching exceeds left capacity");
        }
        if (++right_use[r] > 1) {
            throw std::logic_error("matching uses a right vertex twice");
        }
    }
}

Matching max_matching(const BipartiteGraph& g) {
    const auto adj = g.left_adjacency();
    Matching result = from_match_of_right(HopcroftKarp(adj, g.n_right()).run(), 1, 1);
    validate_matching(g, result);
    return result;
}

std::optional<Matching> right_saturated_2_matching(const BipartiteGraph& g) {
    if (g.n_right() > 2 * g.n_left()) {
        return std::nullopt;
    }
    const auto adj = g.left_adjacency();
    std::vector<std::vector<std::size_t>> doubled(2 * g.n_left());
    for (std::size_t u = 0; u < g.n_left(); ++u) {
        doubled[2 * u] = adj[u];
        doubled[2 * u + 1] = adj[u];
    }
    const auto match_right = HopcroftKarp(doubled, g.n_right()).run();
    Matching result = from_match_of_right(match_right, 2, 2);
    if (!result.saturates_right(g.n_right())) {
        return std::nullopt;
    }
    validate_matching(g, result);
    return result;
}

std::optional<Matching> right_saturated_matching_via_unique_left_degree(const BipartiteGraph& g) {
    for (std::size_t d : g.left_degrees()) {
        if (d > 1) {
            throw std::invalid_argument("every left vertex must have degree at most 1");
        }
    }
    std::vector<std::size_t> owner(g.n_right(), kUnmatched);
    for (const auto& [l, r] : g.edges()) {
        if (owner[r] == kUnmatched) {
            owner[r] = l;
        }
    }
    if (std::find(owner.begin(), owner.end(), kUnmatched) != owner.end()) {
        return std::nullopt;
    }
    Matching result = from_match_of_right(owner, 1, 1);
    validate_matching(g, result);
    return result;
}

Assignment min_cost_perfect_matching(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    for (const auto& row : cost) {
        if (row.size() != n) {
            throw std::invalid_argument("min_cost_perfect_matching needs a square cost grid");
        }
        for (double c : row) {
            if (!std::isfinite(c)) {
                throw std::invalid_argument("min_cost_perfect_matching needs finite costs");
            }
        }
    }
    Assignment out;
    if (n == 0) {
        return out;
    }
    // Potentials-based Hungarian method, 1-based with a virtual column 0.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<std::size_t> row_of_col(n + 1, 0);
    std::vector<std::size_t> way(n + 1, 0);
    std::vector<double> minv(n + 1);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        row_of_col[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = row_of_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (reduced < minv[j]) {
                    minv[j] = reduced;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    out.column_of_row.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        out.column_of_row[row_of_col[j] - 1] = j - 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.cost += cost[i][out.column_of_row[i]];
    }
    return out;
}

BipartiteGraph sample_random_bipartite(std::size_t n_left, std::size_t n_right, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    }
    std::vector<Edge> edges;
    for (std::size_t l = 0; l < n_left; ++l) {
        for (std::size_t r = 0; r < n_right; ++r) {
            if (to_unit(hash_key(seed, {l, r})) < p) {
                edges.emplace_back(l, r);
            }
        }
    }
    return BipartiteGraph(n_left, n_right, std::move(edges));
}

}  // namespace chorefair
