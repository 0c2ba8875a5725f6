#include "tree_oracle.hpp"

#include <map>

namespace hpt::oracle {

namespace {

struct Evaluator {
    const TreeData& data;
    const std::vector<int>& letters;
    std::vector<int> sdeg;  // degrees of the suspended letters
    std::map<unsigned, Vec> memo;

    // Sign of moving the letters of `front` ahead of the rest of `mask`.
    int unshuffle(unsigned mask, unsigned front) const
    {
        int odd_behind = 0, sign = 1;
        for (int k = 0; k < static_cast<int>(letters.size()); ++k) {
            if (!(mask >> k & 1u))
                continue;
            const bool odd = sdeg[k] & 1;
            if (front >> k & 1u) {
                if (odd && (odd_behind & 1))
                    sign = -sign;
            } else if (odd) {
                ++odd_behind;
            }
        }
        return sign;
    }

    Vec b(const Vec& u, const Vec& v) const
    {
        Vec out;
        for (const auto& [i, x] : u)
            for (const auto& [j, y] : v) {
                const int sign = (data.g->degree(i) & 1) ? 1 : -1;
                axpy(out, sign * x * y, data.bracket(i, j));
            }
        return out;
    }

    // Sum over ordered splits of 1/2 eps b(p(I), p(J)).
    Vec vertex(unsigned mask)
    {
        Vec out;
        for (unsigned i = (mask - 1) & mask; i; i = (i - 1) & mask) {
            const unsigned j = mask & ~i;
            Vec pi = p(i), pj = p(j);
            if (pi.empty() || pj.empty())
                continue;
            axpy(out, Rational(unshuffle(mask, i), 2), b(pi, pj));
        }
        return out;
    }

    Vec p(unsigned mask)
    {
        if (auto it = memo.find(mask); it != memo.end())
            return it->second;
        Vec out;
        if ((mask & (mask - 1)) == 0) {
            int k = 0;
            while (!(mask >> k & 1u))
                ++k;
            out = data.nabla.column(letters[k]);
        } else {
            out = data.h.apply(vertex(mask));  // -H = s h s^{-1}
        }
        memo[mask] = out;
        return out;
    }
};

} // namespace

Vec transferred_bracket(const TreeData& data, const std::vector<int>& letters)
{
    Evaluator ev{data, letters, {}, {}};
    for (int x : letters)
        ev.sdeg.push_back(data.m->degree(x) + 1);
    const unsigned all = (1u << letters.size()) - 1;
    if (letters.size() < 2)
        return {};
    return data.pi.apply(ev.vertex(all));
}

} // namespace hpt::oracle
