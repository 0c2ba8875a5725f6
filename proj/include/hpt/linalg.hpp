#pragma once

#include "hpt/graded.hpp"

#include <map>
#include <optional>
#include <vector>

namespace hpt {

// Incremental row echelon form over Q. Vectors are inserted one at a time;
// each stored row remembers which combination of inserted vectors produced
// it, so membership queries return coordinates in terms of the inserted
// vectors. Pivots are leading (smallest) indices, so the result depends only
// on the insertion order.
class Echelon {
public:
    // Inserts v as vector number `count()`. Returns true if v was independent
    // of everything inserted before.
    bool insert(const Vec& v);

    // Coordinates of v in terms of the inserted vectors, or nullopt if v is
    // not in their span. Dependent insertions get coefficient zero.
    std::optional<Vec> express(const Vec& v) const;

    bool contains(const Vec& v) const { return reduce(v).first.empty(); }
    int rank() const { return static_cast<int>(rows_.size()); }
    int count() const { return inserted_; }

    // Combination of inserted vectors that vanished when vector k was
    // inserted (present only for dependent insertions).
    const std::vector<Vec>& relations() const { return relations_; }

private:
    struct Row {
        Vec vec;    // leading entry normalised to 1
        Vec combo;  // vec = sum combo[j] * inserted_j
    };
    // Returns (residual, combo) with residual = v - sum(...), combo expressing
    // (v - residual) in inserted vectors.
    std::pair<Vec, Vec> reduce(const Vec& v) const;

    std::map<int, Row> rows_;  // keyed by pivot index
    std::vector<Vec> relations_;
    int inserted_ = 0;
};

int rank_of(const std::vector<Vec>& vectors);

// Rank of the block of f from source degree n.
int block_rank(const GradedMap& f, int n);

// Dimension of homology per degree of a differential on a module.
std::map<int, int> homology_ranks(const GradedMap& d);

} // namespace hpt
