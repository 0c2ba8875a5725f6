#pragma once

#include "hpt/graded.hpp"

#include <functional>
#include <vector>

namespace hpt::oracle {

// Homotopy transfer of a dg Lie bracket along (nabla, pi, h) by explicit
// sums over binary trees, evaluated on ordered tuples. Works on the
// suspension V = sg with the degree -1 symmetric bracket
//   b(sx, sy) = -(-1)^{|x|} s[x, y]
// and the shifted homotopy H(sx) = -s(hx). Leaves carry nabla, the root pi,
// internal edges -H (the contraction satisfies dh + hd = Id - nabla pi);
// each vertex sums over ordered splits of its leaves with the Koszul sign of
// the unshuffle and a factor 1/2.
struct TreeData {
    ModulePtr g;
    ModulePtr m;
    std::function<Vec(int, int)> bracket;  // [e_i, e_j] in g
    GradedMap nabla;
    GradedMap pi;
    GradedMap h;
};

// l_n(s m_1, ..., s m_n) as coordinates on sM (same indices as M).
Vec transferred_bracket(const TreeData& data, const std::vector<int>& letters);

} // namespace hpt::oracle
