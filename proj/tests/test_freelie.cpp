#include "hpt/freelie.hpp"
#include "test_util.hpp"

#include <doctest.h>

using namespace hpt;
using namespace hpt::testing;

namespace {

std::shared_ptr<FreeLie> free_lie(const ModulePtr& y, int n)
{
    return std::make_shared<FreeLie>(std::make_shared<TensorAlgebra>(y, n));
}

// Ranks of the right-normed brackets [y1,[y2,...,yk]] per (degree, weight),
// computed directly from words without the library's basis.
std::map<std::pair<int, int>, int> spanning_ranks(const TensorAlgebra& t)
{
    const auto& y = t.generators();
    std::map<std::pair<int, int>, std::vector<Vec>> groups;
    for (int w = 1; w < t.size(); ++w) {
        const auto& word = t.word(w);
        Vec v{{t.generator_word(word.back()), 1}};
        int deg = y->degree(word.back());
        for (int k = static_cast<int>(word.size()) - 2; k >= 0; --k) {
            Vec g{{t.generator_word(word[k]), 1}};
            int dg = y->degree(word[k]);
            Vec ab = t.multiply(g, v);
            axpy(ab, -sign_of(dg * deg), t.multiply(v, g));
            v = ab;
            deg += dg;
        }
        groups[{deg, t.module()->weight(w)}].push_back(v);
    }
    std::map<std::pair<int, int>, int> out;
    for (auto& [key, vs] : groups)
        if (int r = rank_of(vs))
            out[key] = r;
    return out;
}

} // namespace

TEST_CASE("Lyndon basis dimensions")
{
    auto even = free_lie(make_module("Y", {{"x", 0}}), 4);
    CHECK(even->size() == 1);

    auto odd = free_lie(make_module("Y", {{"x", 1}}), 4);
    CHECK(odd->dimensions() == std::map<std::pair<int, int>, int>{{{1, 1}, 1}, {{2, 2}, 1}});
    CHECK(odd->module()->label(1) == "[x,x]");
    CHECK(odd->element(1) == Vec{{odd->ambient().find({0, 0}).value(), 2}});

    // necklace counts 2, 1, 2, 3, 6 for two degree 0 letters
    auto two = free_lie(make_module("Y", {{"x", 0}, {"y", 0}}), 5);
    auto dims = two->dimensions();
    CHECK(dims[{0, 1}] == 2);
    CHECK(dims[{0, 2}] == 1);
    CHECK(dims[{0, 3}] == 2);
    CHECK(dims[{0, 4}] == 3);
    CHECK(dims[{0, 5}] == 6);
    CHECK(dims == spanning_ranks(two->ambient()));

    for (int trial = 0; trial < 4; ++trial) {
        auto y = random_module("y", 0, 2, 2);
        if (y->size() == 0)
            continue;
        auto l = free_lie(y, 4);
        CHECK(l->dimensions() == spanning_ranks(l->ambient()));
        std::vector<Vec> all;
        for (int i = 0; i < l->size(); ++i)
            all.push_back(l->element(i));
        CHECK(rank_of(all) == l->size());
    }
}

TEST_CASE("brackets in the tensor algebra")
{
    auto l = free_lie(make_module("Y", {{"x", 0}, {"y", 0}, {"z", 0}}), 3);
    const auto& t = l->ambient();
    int x = l->generator_index(0), y = l->generator_index(1), z = l->generator_index(2);
    CHECK(l->bracket(x, x).empty());
    Vec xy = l->bracket(x, y);
    REQUIRE(xy.size() == 1);
    Vec expected{{*t.find({0, 1}), 1}, {*t.find({1, 0}), -1}};
    CHECK(l->element(xy.begin()->first) == expected);
    // Jacobi on degree 0 letters
    Vec j = l->bracket(Vec{{x, 1}}, l->bracket(y, z));
    axpy(j, 1, l->bracket(Vec{{y, 1}}, l->bracket(z, x)));
    axpy(j, 1, l->bracket(Vec{{z, 1}}, l->bracket(x, y)));
    CHECK(j.empty());
    CHECK_FALSE(l->coordinates(Vec{{*t.find({0, 1}), 1}}).has_value());
}

TEST_CASE("free Lie algebras satisfy the dg Lie axioms")
{
    auto y = make_module("Y", {{"a", 1}, {"b", 2}, {"c", 0}});
    auto l = free_lie(y, 3);
    // d b = a extended as a derivation of T restricts to L
    const auto& t = l->ambient();
    GradedMap dy(y, t.module(), -1);
    dy.add_entry(t.generator_word(0), 1, 1);
    GradedMap dt = t.derivation(dy);
    CHECK(compose(dt, dt).is_zero());
    CHECK(l->closed_under(dt).ok);
    DGLie lie = free_dg_lie(l, l->restrict(dt));
    Verdict v = lie.verify();
    CHECK_MESSAGE(v.ok(), v.summary());
}

TEST_CASE("DGLie rejects broken structure constants")
{
    auto g = make_module("g", {{"x", 1}, {"y", 1}, {"z", 2}});
    auto c = ChainComplex::zero_differential(g);
    DGLie heis(c, {{0, 1, 2, 1}});
    CHECK(heis.verify().ok());
    CHECK_THROWS_AS(DGLie(c, {{0, 2, 2, 1}}), ArgumentError);  // degree mismatch

    auto h = make_module("h", {{"a", 0}, {"b", 0}, {"c", 0}});
    auto ch = ChainComplex::zero_differential(h);
    CHECK_THROWS_AS(DGLie(ch, {{0, 1, 0, 1}, {0, 2, 1, 1}}), ArgumentError);  // Jacobi
    CHECK_THROWS_AS(DGLie(ch, {{0, 1, 2, 1}, {1, 0, 2, 1}}), ArgumentError);  // antisymmetry
    DGLie sl2(ch, {{2, 0, 0, 2}, {2, 1, 1, -2}, {0, 1, 2, 1}});
    CHECK(sl2.verify().ok());

    // d u = v with [x, u] = x is not compatible with d
    auto m = make_module("m", {{"x", 0}, {"u", 1}, {"v", 0}});
    GradedMap d(m, m, -1);
    d.add_entry(2, 1, 1);
    DGLie bad(ChainComplex(m, d), structure_constants(m, {{0, 1, 1, 1}}));
    Verdict ver = bad.verify();
    CHECK_FALSE(ver.checks[2].ok);
}

TEST_CASE("CCE coalgebra of abelian and Heisenberg algebras")
{
    auto g = make_module("g", {{"x", 1}, {"y", 1}, {"z", 2}});
    auto c = ChainComplex::zero_differential(g);
    DGLie abelian(c, StructureConstants{});
    auto cab = cce_coalgebra(abelian, 4);
    CHECK(cab.structure.perturbation().is_zero());
    CHECK(check_master_equation(*cab.coalgebra, cab.structure.total(), cab.tau, abelian).ok);

    DGLie heis(c, {{0, 1, 2, 1}});
    auto ch = cce_coalgebra(heis, 4);
    CHECK(ch.structure.verify().ok());
    const auto& cc = *ch.coalgebra;
    // only the binary corestriction is nonzero
    for (int k = 3; k <= 4; ++k)
        CHECK(ch.structure.lambda_k(k).is_zero());
    // lambda_2(sx sy) = -(-1)^{|x|} s[x, y] = s z
    int sxsy = cc.module()->index_of("sx*sy");
    CHECK(ch.structure.lambda().column(sxsy) == Vec{{2, 1}});
    CHECK(check_master_equation(cc, ch.structure.total(), ch.tau, heis).ok);
    // the derivation in the weight-two word is sz
    CHECK(ch.structure.perturbation().column(sxsy) == Vec{{cc.module()->index_of("sz"), 1}});
}

TEST_CASE("partial squares to zero exactly when Jacobi holds")
{
    // graded Heisenberg: always Jacobi
    auto g = make_module("g", {{"x", 1}, {"y", 1}, {"z", 2}});
    DGLie heis(ChainComplex::zero_differential(g), {{0, 1, 2, 1}});
    CHECK(cce_coalgebra(heis, 3).structure.verify().checks[0].ok);

    // random mutations of the ungraded Heisenberg algebra
    auto h = make_module("h", {{"x", 0}, {"y", 0}, {"z", 0}});
    auto ch = ChainComplex::zero_differential(h);
    int jacobi_true = 0, jacobi_false = 0;
    for (int trial = 0; trial < 10; ++trial) {
        StructureConstants sc{{0, 1, 2, 1}};
        int extra = uniform(1, 2);
        for (int e = 0; e < extra; ++e) {
            int i = uniform(0, 2), j = uniform(0, 2);
            if (i == j)
                continue;
            sc.push_back({std::min(i, j), std::max(i, j), uniform(0, 2), Rational(uniform(1, 3))});
        }
        DGLie lie(ch, structure_constants(h, sc));
        bool jacobi = lie.verify().checks[1].ok;
        auto cce = cce_coalgebra(lie, 3);
        bool square_zero = cce.structure.verify().checks[0].ok;
        CHECK(jacobi == square_zero);
        (jacobi ? jacobi_true : jacobi_false)++;
    }
    CHECK(jacobi_true > 0);
    CHECK(jacobi_false > 0);
}

TEST_CASE("adjoint of the universal twisting cochain is the identity")
{
    auto g = make_module("g", {{"x", 1}, {"y", 1}, {"z", 2}});
    DGLie heis(ChainComplex::zero_differential(g), {{0, 1, 2, 1}});
    auto cce = cce_coalgebra(heis, 4);
    const auto& cc = *cce.coalgebra;
    GradedMap adj = adjoint_coalgebra_morphism(cc, cce.structure.total(), cce.tau, heis, cce);
    CHECK(adj == GradedMap::identity(cc.module()));
    GradedMap bad = -cce.tau;
    CHECK_THROWS_AS(adjoint_coalgebra_morphism(cc, cce.structure.total(), bad, heis, cce), PreconditionError);
}

TEST_CASE("Poincare symmetrization is a coalgebra isomorphism")
{
    auto y = make_module("Y", {{"a", 1}, {"b", 2}});
    auto l = free_lie(y, 3);
    const auto& t = l->ambient();
    SymCoalgebra sym(l->module(), 3);
    GradedMap e = poincare_symmetrization(*l, sym);

    // e(x) = j(x)
    for (int i = 0; i < l->size(); ++i)
        CHECK(e.column(sym.generator_word(i)) == l->element(i));
    // e(ab) = 1/2 (ab + (-1)^{|a||b|} ba)
    int ia = l->generator_index(0), ib = l->generator_index(1);
    int w = *sym.find({std::min(ia, ib), std::max(ia, ib)});
    Vec expected{{*t.find({0, 1}), Rational(1, 2)}, {*t.find({1, 0}), Rational(1, 2)}};
    CHECK(e.column(w) == expected);

    // Delta_T e = (e (x) e) Delta_S on every word
    for (int k = 0; k < sym.size(); ++k) {
        Vec2 lhs = t.diagonal(e.column(k));
        Vec2 rhs = apply_tensor(e, e, sym.diagonal(Vec{{k, 1}}));
        CHECK(lhs == rhs);
    }
    // bijective per (degree, weight)
    std::map<std::pair<int, int>, std::vector<Vec>> images;
    std::map<std::pair<int, int>, int> tdims;
    for (int k = 0; k < sym.size(); ++k)
        images[{sym.module()->degree(k), sym.module()->weight(k)}].push_back(e.column(k));
    for (int k = 0; k < t.size(); ++k)
        ++tdims[{t.module()->degree(k), t.module()->weight(k)}];
    std::map<std::pair<int, int>, int> ranks;
    for (auto& [key, vs] : images)
        ranks[key] = rank_of(vs);
    CHECK(ranks == tdims);
}
