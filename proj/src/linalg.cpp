#include "hpt/linalg.hpp"

namespace hpt {

std::pair<Vec, Vec> Echelon::reduce(const Vec& v) const
{
    Vec residual = v;
    Vec combo;
    auto it = residual.begin();
    while (it != residual.end()) {
        auto row = rows_.find(it->first);
        if (row == rows_.end()) {
            ++it;
            continue;
        }
        const int key = it->first;
        const Rational c = it->second;
        axpy(residual, -c, row->second.vec);
        axpy(combo, c, row->second.combo);
        it = residual.upper_bound(key);
    }
    return {std::move(residual), std::move(combo)};
}

bool Echelon::insert(const Vec& v)
{
    const int id = inserted_++;
    auto [residual, combo] = reduce(v);
    // residual = v - combo . inserted
    if (residual.empty()) {
        Vec rel = scaled(combo, -1);
        add_to(rel, id, 1);
        relations_.push_back(std::move(rel));
        return false;
    }
    Vec row_combo = scaled(combo, -1);
    add_to(row_combo, id, 1);
    const Rational lead = residual.begin()->second;
    const Rational inv = 1 / lead;
    const int pivot = residual.begin()->first;
    rows_.emplace(pivot, Row{scaled(residual, inv), scaled(row_combo, inv)});
    return true;
}

std::optional<Vec> Echelon::express(const Vec& v) const
{
    auto [residual, combo] = reduce(v);
    if (!residual.empty())
        return std::nullopt;
    return combo;
}

int rank_of(const std::vector<Vec>& vectors)
{
    Echelon e;
    for (const auto& v : vectors)
        e.insert(v);
    return e.rank();
}

int block_rank(const GradedMap& f, int n)
{
    std::vector<Vec> cols;
    for (int j : f.source()->indices_in_degree(n))
        cols.push_back(f.column(j));
    return rank_of(cols);
}

std::map<int, int> homology_ranks(const GradedMap& d)
{
    std::map<int, int> out;
    const auto& m = d.source();
    std::map<int, int> rk;
    for (int n : m->degrees())
        rk[n] = block_rank(d, n);
    for (int n : m->degrees()) {
        const int dim = static_cast<int>(m->indices_in_degree(n).size());
        const int boundaries = rk.count(n + 1) ? rk[n + 1] : 0;
        out[n] = dim - rk[n] - boundaries;
    }
    return out;
}

} // namespace hpt
