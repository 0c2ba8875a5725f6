#include "canonical.hpp"
#include "test_util.hpp"
#include "tree_oracle.hpp"

#include <doctest.h>

#include <set>

using namespace hpt;
using namespace hpt::testing;

namespace {

oracle::TreeData tree_data(const Example& e)
{
    const DGLie& g = e.g;
    return {g.module(), e.c.small().module(), [&g](int i, int j) { return g.bracket()(i, j); },
            e.c.nabla(), e.c.pi(), e.c.h()};
}

// Words of the given length where the transferred corestriction and the
// tree sum differ.
int oracle_mismatches(const Example& e, const LieTransferResult& r, int length)
{
    const auto& src = *r.source;
    GradedMap lambda = r.D.lambda_k(length);
    int bad = 0;
    for (int w = 0; w < src.size(); ++w) {
        if (src.length(w) != length)
            continue;
        if (oracle::transferred_bracket(tree_data(e), src.word(w)) != lambda.column(w))
            ++bad;
    }
    return bad;
}

} // namespace

TEST_CASE("symmetric contraction from random contractions")
{
    for (int trial = 0; trial < 3; ++trial) {
        Contraction c = random_contraction(0, 2, 3);
        auto sm = std::make_shared<const SymCoalgebra>(suspend(c.small().module()), 3);
        auto sg = std::make_shared<const SymCoalgebra>(suspend(c.big().module()), 3);
        Contraction s = symmetric_contraction(c, sm, sg);
        CHECK(s.verify().ok());
        // nabla on a letter is s nabla
        if (c.small().module()->size() > 0) {
            Vec expected;
            for (const auto& [i, q] : c.nabla().column(0))
                add_to(expected, sg->generator_word(i), q);
            CHECK(s.nabla().column(sm->generator_word(0)) == expected);
        }
    }
}

TEST_CASE("transfer of an abelian algebra is zero")
{
    Example e = abelian_example();
    LieTransferResult r = lie_transfer(e.c, e.g, 4);
    CHECK(r.D.lambda().is_zero());
    const ModulePtr& m = e.c.small().module();
    CHECK(r.tau == compose(e.c.nabla(), compose(desuspension_map(r.source->generators(), m), r.source->projection())));
}

TEST_CASE("identity contraction keeps only the binary corestriction")
{
    for (Example e : {heisenberg_example(), abelian_example()}) {
        LieTransferResult r = lie_transfer(e.c, e.g, 4);
        for (int k = 3; k <= 4; ++k)
            CHECK(r.D.lambda_k(k).is_zero());
        CHECK(r.D.lambda() == r.cce.structure.lambda());
    }
}

TEST_CASE("transferred brackets agree with the tree sum")
{
    Example e = acyclic_pair_example();
    LieTransferResult r = lie_transfer(e.c, e.g, 4);
    CHECK_FALSE(r.D.lambda_k(3).is_zero());
    for (int k = 2; k <= 4; ++k)
        CHECK(oracle_mismatches(e, r, k) == 0);
    // lambda_3(sx sx sy) is a multiple of sz
    const auto& mod = r.source->module();
    Vec l3 = r.D.lambda().column(mod->index_of("sx*sx*sy"));
    REQUIRE(l3.size() == 1);
    CHECK(l3.begin()->first == 2);

    Example h = heisenberg_example();
    LieTransferResult rh = lie_transfer(h.c, h.g, 4);
    for (int k = 2; k <= 4; ++k)
        CHECK(oracle_mismatches(h, rh, k) == 0);
}

TEST_CASE("lie_transfer rejects bad input")
{
    Example e = heisenberg_example();
    CHECK_THROWS_AS(lie_transfer(e.c, e.g, 1), ArgumentError);
    Example a = acyclic_pair_example();
    Contraction broken(a.c.small(), a.c.big(), a.c.nabla(), a.c.pi(), GradedMap::zero(a.g.module(), a.g.module(), 1));
    CHECK_THROWS_AS(lie_transfer(broken, a.g, 3), PreconditionError);
}

TEST_CASE("transfer contraction for abelian and acyclic pair")
{
    Example a = abelian_example();
    LieTransferResult ra = lie_transfer(a.c, a.g, 4);
    lie_transfer_contraction(ra, a.c, a.g);
    CHECK(*ra.phi == GradedMap::identity(ra.source->module()));
    CHECK(ra.contraction->pi() == ra.tilde->pi());
    CHECK(ra.contraction->h() == ra.tilde->h());
    CHECK(ra.delta->is_zero());

    Example e = acyclic_pair_example();
    LieTransferResult r = lie_transfer(e.c, e.g, 4);
    lie_transfer_contraction(r, e.c, e.g);
    CHECK(r.contraction->verify().ok());
    CHECK(r.tilde->verify().ok());
    CHECK(compose(r.contraction->pi(), r.tau_bar) == GradedMap::identity(r.source->module()));
    CHECK(compose(*r.phi_inverse, *r.phi) == GradedMap::identity(r.source->module()));
    // Phi is a chain map S^c_D[sM] -> S^c_delta[sM]
    GradedMap d_delta = r.D.d0() + *r.delta;
    CHECK(compose(*r.phi, r.D.total()) == compose(d_delta, *r.phi));
}

TEST_CASE("theta recursion")
{
    Example a = abelian_example();
    LieTransferResult ra = lie_transfer(a.c, a.g, 3);
    lie_transfer_contraction(ra, a.c, a.g);
    ThetaResult ta = theta_recursion(ra, a.c, a.g);
    CHECK(ta.theta == compose(ta.loop->twisting_cochain(), ra.contraction->pi()));

    for (Example e : {heisenberg_example(), acyclic_pair_example()}) {
        LieTransferResult r = lie_transfer(e.c, e.g, 4);
        lie_transfer_contraction(r, e.c, e.g);
        ThetaResult t = theta_recursion(r, e.c, e.g);
        DGLie loop = t.loop->lie();
        CHECK(check_master_equation(*r.cce.coalgebra, r.cce.structure.total(), t.theta, loop).ok);
        CHECK(compose(t.theta, r.tau_bar) == t.loop->twisting_cochain());
    }

    // x in degree 0 is not connected
    auto g = make_module("g", {{"x", 0}, {"y", 1}});
    ChainComplex cx = ChainComplex::zero_differential(g);
    DGLie lie(cx, StructureConstants{});
    Contraction id = Contraction::identity(cx);
    LieTransferResult r = lie_transfer(id, lie, 3);
    lie_transfer_contraction(r, id, lie);
    CHECK_THROWS_AS(theta_recursion(r, id, lie), PreconditionError);
}

namespace {

struct CobarAlgebra {
    std::shared_ptr<const LoopLie> loop;
    Algebra algebra;
};

CobarAlgebra cobar_algebra(const CCECoalgebra& cce, int n)
{
    auto loop = std::make_shared<const LoopLie>(std::make_shared<const Cobar>(cce.coalgebra, cce.structure.total(), n));
    auto t = loop->cobar().tensor_ptr();
    BasisProduct mu = [t](int i, int j) {
        auto k = t->concat(i, j);
        return k ? Vec{{*k, 1}} : Vec{};
    };
    return {loop, Algebra{t->module(), loop->cobar().total(), mu, 0}};
}

} // namespace

TEST_CASE("homotopy recursion")
{
    Example e = acyclic_pair_example();
    const int n = 3;
    LieTransferResult r = lie_transfer(e.c, e.g, n);
    lie_transfer_contraction(r, e.c, e.g);
    const SymCoalgebra& b = *r.source;
    const SymCoalgebra& c = *r.cce.coalgebra;
    const Contraction& bc = *r.contraction;
    CobarAlgebra a = cobar_algebra(r.cce, n);
    GradedMap j = a.loop->free().inclusion();
    GradedMap t2 = compose(j, a.loop->twisting_cochain());
    CHECK(check_twisting_cochain(c, r.cce.structure.total(), t2, a.algebra.d, a.algebra.mu).ok);

    // t1 = t2, h_B = eps eta: nothing to correct
    HomotopyResult same = homotopy_recursion(b, c, bc, a.algebra, t2, t2, unit_map(b, a.algebra));
    CHECK(same.verdict.ok());
    CHECK(same.h == unit_map(c, a.algebra));

    // t1 = L(tau_bar) theta
    ThetaResult th = theta_recursion(r, e.c, e.g);
    GradedMap l_tau = loop_lie_functor(*th.loop, *a.loop, r.tau_bar);
    GradedMap t1 = compose({&j, &l_tau, &th.theta});
    CHECK(check_twisting_cochain(c, r.cce.structure.total(), t1, a.algebra.d, a.algebra.mu).ok);
    HomotopyResult hc = homotopy_recursion(b, c, bc, a.algebra, t1, t2, unit_map(b, a.algebra));
    CHECK_MESSAGE(hc.verdict.ok(), hc.verdict.summary());
    CHECK_FALSE(hc.h == unit_map(c, a.algebra));

    // flipping the sign of t1 on a word outside the image of nabla leaves
    // t1 nabla alone but breaks the homotopy
    std::set<int> image;
    for (int w = 0; w < b.size(); ++w)
        for (const auto& [k, q] : bc.nabla().column(w))
            image.insert(k);
    int target = -1;
    for (int w = 1; w < c.size() && target < 0; ++w)
        if (!image.count(w) && !t1.column(w).empty())
            target = w;
    REQUIRE(target >= 0);
    GradedMap mutated = t1;
    mutated.set_column(target, scaled(t1.column(target), -1));
    CHECK(compose(mutated, bc.nabla()) == compose(t1, bc.nabla()));
    HomotopyResult bad = homotopy_recursion(b, c, bc, a.algebra, mutated, t2, unit_map(b, a.algebra));
    CHECK_FALSE(bad.verdict.checks[0].ok);

    // h_B off by a scalar fails the normalization
    GradedMap twice = Rational(2) * unit_map(b, a.algebra);
    CHECK_THROWS_AS(homotopy_recursion(b, c, bc, a.algebra, t1, t2, twice), PreconditionError);
}

TEST_CASE("sh transfer of strict structures matches the strict transfer")
{
    for (Example e : {abelian_example(), heisenberg_example(), acyclic_pair_example()}) {
        CAPTURE(e.name);
        CCECoalgebra cce = cce_coalgebra(e.g, 4);
        ShTransferResult sh = sh_transfer(e.c, cce.structure, 4);
        LieTransferResult strict = lie_transfer(e.c, e.g, 4);
        CHECK(sh.lie.D.lambda().source()->size() == strict.D.lambda().source()->size());
        for (int w = 0; w < strict.source->size(); ++w)
            CHECK(sh.lie.D.lambda().column(w) == strict.D.lambda().column(w));
        for (const Contraction* k : {&sh.loop_contraction, &sh.perturbed_loop, &sh.composite, &*sh.lie.contraction})
            CHECK(k->verify().ok());
        CHECK(check_master_equation(*sh.lie.source, sh.lie.D.total(), sh.lie.tau, sh.loop_lie).ok);
        EquivalenceReport rep = verify_sh_equivalence(sh, cce.structure);
        CHECK_MESSAGE(rep.verdict.ok(), rep.verdict.summary());
        CHECK(rep.source_homology == rep.target_homology);
    }
}

TEST_CASE("sh transfer of the zero structure")
{
    Example e = abelian_example();
    CCECoalgebra cce = cce_coalgebra(e.g, 3);
    ShTransferResult sh = sh_transfer(e.c, cce.structure, 3, false);
    CHECK(sh.lie.D.lambda().is_zero());
    CHECK(sh.partial_loop.is_zero());
    const auto& src = *sh.lie.source;
    GradedMap tau_m = compose(desuspension_map(src.generators(), e.c.small().module()), src.projection());
    // L is free, so tau is corrected on longer words; on letters it is nabla tau_M
    GradedMap on_letters = compose(sh.lie.tau, src.inclusion());
    GradedMap inc = src.inclusion();
    CHECK(on_letters == compose({&sh.composite.nabla(), &tau_m, &inc}));
}

TEST_CASE("sh transfer of a genuine sh structure")
{
    // the transferred structure of the acyclic pair: d = 0, lambda_2 and lambda_3 nonzero
    Example e = acyclic_pair_example();
    LieTransferResult strict = lie_transfer(e.c, e.g, 4);
    const ShStructure& partial = strict.D;
    REQUIRE_FALSE(partial.lambda_k(2).is_zero());
    REQUIRE_FALSE(partial.lambda_k(3).is_zero());
    Contraction id = Contraction::identity(e.c.small());

    ShTransferResult sh = sh_transfer(id, partial, 4);
    CHECK(sh.lie.D.verify().ok());
    CHECK(check_master_equation(*sh.lie.source, sh.lie.D.total(), sh.lie.tau, sh.loop_lie).ok);
    CHECK(sh.lie.contraction->verify().ok());
    CHECK(sh.loop_lie.verify().checks[2].ok);
    EquivalenceReport rep = verify_sh_equivalence(sh, partial);
    CHECK_MESSAGE(rep.verdict.ok(), rep.verdict.summary());
    CHECK(rep.source_homology == rep.base_homology);
    // along the identity the structure comes back
    CHECK(sh.lie.D.lambda() == partial.lambda());

    auto other = std::make_shared<const SymCoalgebra>(suspend(e.g.module()), 4);
    ShStructure wrong(other, ChainComplex::zero_differential(other->generators()),
                      GradedMap::zero(other->module(), other->generators(), -1));
    CHECK_THROWS_AS(sh_transfer(id, wrong, 4), ArgumentError);
    CHECK_THROWS_AS(sh_transfer(id, partial, 3), ArgumentError);
}
