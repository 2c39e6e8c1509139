#include "chorefair/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace chorefair {

namespace {

enum class Notion { EnvyFree, Proportional };

// Depth-first search over owners[0..m-1] in lexicographic order (chore 0 is the
// most significant digit). Layer j of cost_ holds d_i(A_k) after chores 0..j-1
// are placed; layers are copied rather than undone so every partial sum is
// taken in chore order, exactly as bundle_disutility does.
class ExistenceSearch {
public:
    ExistenceSearch(const DisutilityMatrix& matrix, Notion notion)
        : d_(matrix),
          notion_(notion),
          n_(matrix.n()),
          m_(matrix.m()),
          owners_(m_, 0),
          cost_((m_ + 1) * n_ * n_, 0.0),
          share_(n_),
          remaining_(n_ * (m_ + 1), 0.0),
          sizes_(n_, 0) {
        for (std::size_t i = 0; i < n_; ++i) {
            share_[i] = matrix.row_total(i) / static_cast<double>(n_);
            // remaining_[i][j] = sum of d_i over chores j..m-1
            for (std::size_t j = m_; j-- > 0;) {
                remaining_[i * (m_ + 1) + j] = remaining_[i * (m_ + 1) + j + 1] + matrix(i, j);
            }
        }
    }

    std::optional<std::vector<std::size_t>> run() {
        if (search(0)) {
            return owners_;
        }
        return std::nullopt;
    }

private:
    double* layer(std::size_t depth) { return cost_.data() + depth * n_ * n_; }

    bool complete_ok() {
        if (notion_ == Notion::Proportional) {
            return true;  // own-cost bound already enforced along the path
        }
        // Recompute sums in chore order so the verdict matches is_envy_free exactly.
        const Allocation alloc = Allocation::from_owners(n_, owners_);
        return is_envy_free(d_, alloc);
    }

    // Sound pruning: own costs only grow; d_i(A_k) can grow by at most the
    // remaining chores' total for i.
    bool prunable(std::size_t next_chore) {
        const double* cost = layer(next_chore);
        const std::size_t left = m_ - next_chore;
        std::size_t empty = 0;
        for (std::size_t k = 0; k < n_; ++k) {
            empty += sizes_[k] == 0 ? 1 : 0;
        }
        for (std::size_t i = 0; i < n_; ++i) {
            const double own = cost[i * n_ + i];
            if (own > share_[i]) {
                return true;  // EF implies PROP, so this also prunes EF
            }
            if (notion_ == Notion::EnvyFree) {
                if (empty > left && own > 0.0) {
                    return true;  // some bundle ends up empty and i would envy it
                }
                const double slack = remaining_[i * (m_ + 1) + next_chore];
                for (std::size_t k = 0; k < n_; ++k) {
                    if (k != i && own > (cost[i * n_ + k] + slack) * (1.0 + 1e-12)) {
                        return true;
                    }
                }
            }
        }
        return false;
    }

    bool search(std::size_t j) {
        if (j == m_) {
            return complete_ok();
        }
        for (std::size_t a = 0; a < n_; ++a) {
            owners_[j] = a;
            ++sizes_[a];
            const double* parent = layer(j);
            double* child = layer(j + 1);
            std::copy(parent, parent + n_ * n_, child);
            for (std::size_t i = 0; i < n_; ++i) {
                child[i * n_ + a] += d_(i, j);
            }
            const bool hit = !prunable(j + 1) && search(j + 1);
            --sizes_[a];
            if (hit) {
                return true;
            }
        }
        return false;
    }

    const DisutilityMatrix& d_;
    Notion notion_;
    std::size_t n_;
    std::size_t m_;
    std::vector<std::size_t> owners_;
    std::vector<double> cost_;
    std::vector<double> share_;
    std::vector<double> remaining_;
    std::vector<std::size_t> sizes_;
};

ExistenceResult decide(const DisutilityMatrix& matrix, Notion notion) {
    if (!assignments_within(matrix.n(), matrix.m(), kOracleEnumerationLimit)) {
        throw std::domain_error("instance too large for exact enumeration (n^m > 1e8)");
    }
    ExistenceResult result;
    if (auto owners = ExistenceSearch(matrix, notion).run()) {
        result.exists = true;
        result.witness = Allocation::from_owners(matrix.n(), *owners);
    }
    return result;
}

}  // namespace

ExistenceResult exists_envy_free(const DisutilityMatrix& matrix) { return decide(matrix, Notion::EnvyFree); }

ExistenceResult exists_proportional(const DisutilityMatrix& matrix) { return decide(matrix, Notion::Proportional); }

}  // namespace chorefair
