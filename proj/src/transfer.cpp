#include "hpt/transfer.hpp"

#include "hpt/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace hpt {

namespace {

IdentityCheck compare(std::string name, const GradedMap& lhs, const GradedMap& rhs)
{
    IdentityCheck out{std::move(name)};
    if (auto j = first_difference(lhs, rhs)) {
        out.ok = false;
        out.witness = lhs.source()->label(*j);
    }
    return out;
}

void require_ok(const Verdict& v, const std::string& context)
{
    if (!v.ok())
        throw InternalError(context + "\n" + v.summary());
}

GradedMap d0_of(const SymCoalgebra& c, const GradedMap& d_generators)
{
    return coderivation_from_corestrictions(c, compose(d_generators, c.projection()));
}

// Fixed point of x -> step(x) starting from `start`; weight recursions settle
// after at most max_weight + 1 rounds.
template <class Step>
GradedMap iterate_to_fixed_point(GradedMap x, int max_weight, Step step, const std::string& what)
{
    for (int round = 0; round <= max_weight + 2; ++round) {
        GradedMap next = step(x);
        if (next == x)
            return x;
        x = std::move(next);
    }
    throw InternalError(what + ": recursion did not settle");
}

std::map<int, int> nonzero_homology(const GradedMap& d)
{
    std::map<int, int> out;
    for (const auto& [n, r] : homology_ranks(d))
        if (r)
            out[n] = r;
    return out;
}

bool connected(const ModulePtr& m)
{
    bool pos = true, neg = true;
    for (int i = 0; i < m->size(); ++i) {
        pos = pos && m->degree(i) > 0;
        neg = neg && m->degree(i) < 0;
    }
    return pos || neg;
}

LieTransferResult transfer_impl(const Contraction& c, const DGLie& g, int n)
{
    const ModulePtr& m = c.small().module();
    auto sm = suspend(m);
    auto source = std::make_shared<const SymCoalgebra>(sm, n);
    GradedMap tau_m = compose(desuspension_map(sm, m), source->projection());
    GradedMap tau = compose(c.nabla(), tau_m);
    GradedMap lambda(source->module(), sm, -1);
    GradedMap s_pi = compose(suspension_map(m, sm), c.pi());

    int longest = 0;
    for (int w = 0; w < source->size(); ++w)
        longest = std::max(longest, source->length(w));
    for (int k = 2; k <= longest; ++k) {
        GradedMap a = cup_bracket(*source, tau, tau, g.module(), g.bracket());
        a *= Rational(1, 2);
        GradedMap ak = corestriction_part(*source, a, k);
        tau += compose(c.h(), ak);
        lambda += compose(s_pi, ak);
    }

    ShStructure d(source, ChainComplex(sm, suspended_differential(c.small().d(), sm)), std::move(lambda));
    CCECoalgebra cce = cce_coalgebra(g, n);
    GradedMap tau_bar =
        coalgebra_morphism(*source, *cce.coalgebra, compose(suspension_map(g.module(), cce.coalgebra->generators()), tau));
    return LieTransferResult{n, source, std::move(d), std::move(tau), std::move(cce), std::move(tau_bar),
                             {}, {}, {}, {}, {}, {}};
}

} // namespace

GradedMap shifted_map(const GradedMap& f, const ModulePtr& s_source, const ModulePtr& s_target)
{
    if (s_source->size() != f.source()->size() || s_target->size() != f.target()->size())
        throw ArgumentError("shifted_map: suspended modules do not match");
    GradedMap out(s_source, s_target, f.degree());
    const int sign = sign_of(f.degree());
    for (int j = 0; j < f.source()->size(); ++j)
        out.set_column(j, scaled(f.column(j), sign));
    return out;
}

GradedMap symmetric_homotopy(const SymCoalgebra& c, const GradedMap& p, const GradedMap& h)
{
    const auto& v = c.generators();
    auto lift = [&](const Vec& x) {
        Vec out;
        for (const auto& [g, q] : x)
            add_to(out, c.generator_word(g), q);
        return out;
    };
    std::vector<Vec> p_words, h_words;
    for (int g = 0; g < v->size(); ++g) {
        p_words.push_back(lift(p.column(g)));
        h_words.push_back(lift(h.column(g)));
    }

    GradedMap out(c.module(), c.module(), 1);
    for (int w = 1; w < c.size(); ++w) {
        const auto& letters = c.word(w);
        const int k = static_cast<int>(letters.size());
        std::vector<int> order(k);
        std::iota(order.begin(), order.end(), 0);
        Rational factorial = 1;
        for (int i = 2; i <= k; ++i)
            factorial *= i;
        Vec col;
        do {
            std::vector<int> seq(k);
            for (int i = 0; i < k; ++i)
                seq[i] = letters[order[i]];
            const int eps = c.normalize(seq).first;
            int prefix = 0;
            for (int i = 0; i < k; ++i) {
                Vec prod{{0, 1}};
                for (int j = 0; j < k && !prod.empty(); ++j) {
                    const Vec& factor = j < i ? p_words[seq[j]] : j == i ? h_words[seq[j]] : Vec{{c.generator_word(seq[j]), 1}};
                    prod = c.multiply(prod, factor);
                }
                axpy(col, Rational(eps * sign_of(prefix)) / factorial, prod);
                prefix += v->degree(seq[i]);
            }
        } while (std::next_permutation(order.begin(), order.end()));
        out.set_column(w, std::move(col));
    }
    return out;
}

Contraction symmetric_contraction(const Contraction& c, std::shared_ptr<const SymCoalgebra> small,
                                  std::shared_ptr<const SymCoalgebra> big)
{
    const auto& sm = small->generators();
    const auto& sg = big->generators();
    GradedMap s_nabla = shifted_map(c.nabla(), sm, sg);
    GradedMap s_pi = shifted_map(c.pi(), sg, sm);
    GradedMap s_h = shifted_map(c.h(), sg, sg);
    GradedMap p = compose(s_nabla, s_pi);
    Contraction raw(ChainComplex(small->module(), d0_of(*small, shifted_map(c.small().d(), sm, sm))),
                    ChainComplex(big->module(), d0_of(*big, shifted_map(c.big().d(), sg, sg))),
                    symmetric_power(*small, *big, s_nabla), symmetric_power(*big, *small, s_pi),
                    symmetric_homotopy(*big, p, s_h));
    Contraction out = repair_side_conditions(raw);
    require_ok(out.verify(), "symmetric contraction");
    return out;
}

Verdict verify_lie_transfer(const LieTransferResult& r, const Contraction& c, const DGLie& g)
{
    Verdict v;
    const auto& src = *r.source;
    v.checks.push_back(check_master_equation(src, r.D.total(), r.tau, g));
    v.checks.back().name = "master equation D tau = 1/2 [tau, tau]";
    const ModulePtr& m = c.small().module();
    GradedMap tau_m = compose(desuspension_map(src.generators(), m), src.projection());
    v.checks.push_back(compare("pi tau = tau_M", compose(c.pi(), r.tau), tau_m));
    v.checks.push_back(compare("h tau = 0", compose(c.h(), r.tau), GradedMap::zero(src.module(), g.module(), 0)));
    for (auto& check : r.D.verify().checks) {
        check.name = "D: " + check.name;
        v.checks.push_back(std::move(check));
    }
    for (auto& check : check_coalgebra_morphism(src, *r.cce.coalgebra, r.tau_bar, r.D.total(),
                                                r.cce.structure.total())
                           .checks) {
        check.name = "tau_bar: " + check.name;
        v.checks.push_back(std::move(check));
    }
    return v;
}

LieTransferResult lie_transfer(const Contraction& c, const DGLie& g, int max_weight)
{
    if (max_weight < 2)
        throw ArgumentError("lie_transfer: max weight must be at least 2");
    if (!same_module(c.big().module(), g.module()) || !(c.big().d() == g.d()))
        throw ArgumentError("lie_transfer: contraction and Lie algebra disagree on g");
    Verdict vc = c.verify();
    if (!vc.ok())
        throw PreconditionError("lie_transfer: invalid contraction\n" + vc.summary());
    Verdict vg = g.verify();
    if (!vg.ok())
        throw PreconditionError("lie_transfer: not a dg Lie algebra\n" + vg.summary());
    LieTransferResult r = transfer_impl(c, g, max_weight);
    require_ok(verify_lie_transfer(r, c, g), "lie_transfer");
    return r;
}

void lie_transfer_contraction(LieTransferResult& r, const Contraction& c, const DGLie& g)
{
    const auto& cce = r.cce;
    Contraction sym = symmetric_contraction(c, r.source, cce.coalgebra);
    PerturbedContraction pc =
        basic_perturbation_lemma(sym, Perturbation{cce.structure.perturbation(), cce.coalgebra->filtration()});
    const Contraction& tilde = pc.contraction;

    const auto& mod = r.source->module();
    GradedMap id = GradedMap::identity(mod);
    GradedMap phi = compose(tilde.pi(), r.tau_bar);
    GradedMap lower = id - phi;
    Filtration f = r.source->filtration();
    if (auto s = weight_shift(lower, f, f); s && *s >= 0)
        throw InternalError("lie_transfer_contraction: Phi - Id does not lower the filtration");
    GradedMap inverse = id;
    GradedMap term = id;
    for (int i = 0; i <= r.max_weight + 1 && !term.is_zero(); ++i) {
        term = compose(lower, term);
        inverse += term;
    }
    if (!term.is_zero())
        throw InternalError("lie_transfer_contraction: Neumann series did not terminate");

    GradedMap pi = compose(inverse, tilde.pi());
    GradedMap h = tilde.h() - compose({&tilde.h(), &r.tau_bar, &pi});
    Contraction out(ChainComplex(mod, r.D.total()), ChainComplex(cce.coalgebra->module(), cce.structure.total()),
                    r.tau_bar, std::move(pi), std::move(h));
    require_ok(out.verify(), "lie_transfer_contraction");
    (void)g;

    r.symmetric = std::move(sym);
    r.delta = pc.delta_small;
    r.tilde = tilde;
    r.phi = std::move(phi);
    r.phi_inverse = std::move(inverse);
    r.contraction = std::move(out);
}

ShTransferResult sh_transfer(const Contraction& c, const ShStructure& partial, int max_weight, bool with_contraction)
{
    if (max_weight < 2)
        throw ArgumentError("sh_transfer: max weight must be at least 2");
    const SymCoalgebra& carrier = partial.carrier();
    const ModulePtr& g = c.big().module();
    const ModulePtr& sg = carrier.generators();
    if (carrier.max_weight() != max_weight)
        throw ArgumentError("sh_transfer: carrier truncation differs from the requested weight");
    bool shapes = sg->size() == g->size();
    for (int i = 0; shapes && i < g->size(); ++i)
        shapes = sg->degree(i) == g->degree(i) + 1 && sg->weight(i) == g->weight(i);
    if (!shapes || !(partial.generators().d() == shifted_map(c.big().d(), sg, sg)))
        throw ArgumentError("sh_transfer: sh structure does not live on S^c[sg]");
    Verdict vc = c.verify();
    if (!vc.ok())
        throw PreconditionError("sh_transfer: invalid contraction\n" + vc.summary());
    partial.require_valid();

    auto cobar = std::make_shared<const Cobar>(partial.carrier_ptr(), partial.d0(), max_weight);
    auto loop = std::make_shared<const LoopLie>(cobar);
    GradedMap partial_loop = loop->linear_part(partial.perturbation());
    const ModulePtr& l = loop->module();

    GradedMap nabla(g, l, 0), pi(l, g, 0);
    for (int i = 0; i < g->size(); ++i) {
        const int j = loop->lie_generator(carrier.generator_word(i));
        nabla.add_entry(j, i, 1);
        pi.add_entry(i, j, 1);
    }
    Contraction loop_contraction = solve_contraction(c.big(), ChainComplex(l, loop->total()), pi, nabla);
    PerturbedContraction pc =
        basic_perturbation_lemma(loop_contraction, Perturbation{partial_loop, Filtration::from_module_weights(l)});
    if (!pc.delta_small.is_zero())
        throw InternalError("sh_transfer: induced perturbation on g is nonzero");
    Contraction perturbed_loop = pc.contraction;
    Contraction composite = compose_contractions(c, perturbed_loop);
    require_ok(composite.verify(), "sh_transfer: composite contraction");
    DGLie loop_lie = loop->lie(partial_loop);

    LieTransferResult lie = transfer_impl(composite, loop_lie, max_weight);
    require_ok(verify_lie_transfer(lie, composite, loop_lie), "sh_transfer");
    if (with_contraction)
        lie_transfer_contraction(lie, composite, loop_lie);
    return ShTransferResult{loop,
                            std::move(partial_loop),
                            std::move(loop_lie),
                            std::move(loop_contraction),
                            std::move(perturbed_loop),
                            std::move(composite),
                            std::move(lie)};
}

ThetaResult theta_recursion(const LieTransferResult& r, const Contraction& c, const DGLie& g)
{
    if (!r.contraction)
        throw PreconditionError("theta_recursion: the transfer contraction has not been built");
    if (!connected(c.small().module()))
        throw PreconditionError("theta_recursion: M is not connected");
    if (!connected(g.module()))
        throw PreconditionError("theta_recursion: g is not connected");

    auto loop = std::make_shared<const LoopLie>(std::make_shared<const Cobar>(r.source, r.D.total(), r.max_weight));
    const SymCoalgebra& cg = *r.cce.coalgebra;
    const Contraction& k = *r.contraction;
    GradedMap base = compose(loop->twisting_cochain(), k.pi());
    const auto bracket = loop->free().product();
    GradedMap theta = iterate_to_fixed_point(
        base, r.max_weight,
        [&](const GradedMap& t) {
            GradedMap half = cup_bracket(cg, t, t, loop->module(), bracket);
            half *= Rational(1, 2);
            return base + compose(half, k.h());
        },
        "theta_recursion");
    return ThetaResult{loop, std::move(theta)};
}

GradedMap unit_map(const SymCoalgebra& c, const Algebra& a)
{
    GradedMap out(c.module(), a.module, 0);
    out.add_entry(a.unit, 0, 1);
    return out;
}

HomotopyResult homotopy_recursion(const SymCoalgebra& b, const SymCoalgebra& c, const Contraction& bc,
                                  const Algebra& a, const GradedMap& t1, const GradedMap& t2,
                                  const GradedMap& h_b)
{
    Verdict vn = check_coalgebra_morphism(b, c, bc.nabla(), bc.small().d(), bc.big().d());
    if (!vn.ok())
        throw PreconditionError("homotopy_recursion: nabla is not a dg coalgebra morphism\n" + vn.summary());
    if (h_b.column(0).count(a.unit) == 0 || h_b.column(0).at(a.unit) != 1)
        throw PreconditionError("homotopy_recursion: h_B is not normalized");
    auto cup = [&](const SymCoalgebra& on, const GradedMap& x, const GradedMap& y) {
        return cup_product(on, x, y, a.module, a.mu);
    };
    GradedMap t1n = compose(t1, bc.nabla()), t2n = compose(t2, bc.nabla());
    IdentityCheck pre = compare("D h_B = (t1 nabla) u h_B - h_B u (t2 nabla)", hom_differential(h_b, bc.small().d(), a.d),
                                cup(b, t1n, h_b) - cup(b, h_b, t2n));
    if (!pre.ok)
        throw PreconditionError("homotopy_recursion: " + pre.name + " fails at " + pre.witness.value_or("?"));

    GradedMap base = compose(h_b, bc.pi());
    const int n = c.max_weight();
    GradedMap h = iterate_to_fixed_point(
        base, n, [&](const GradedMap& x) { return base - compose(cup(c, t1, x) - cup(c, x, t2), bc.h()); },
        "homotopy_recursion");

    HomotopyResult out{h, {}};
    out.verdict.checks.push_back(
        compare("D h = t1 u h - h u t2", hom_differential(h, bc.big().d(), a.d), cup(c, t1, h) - cup(c, h, t2)));
    out.verdict.checks.push_back(compare("h nabla = h_B", compose(h, bc.nabla()), h_b));
    IdentityCheck norm{"eps h eta = eps eta"};
    const Vec& at_unit = h.column(0);
    norm.ok = at_unit.count(a.unit) && at_unit.at(a.unit) == 1;
    if (!norm.ok)
        norm.witness = c.module()->label(0);
    out.verdict.checks.push_back(norm);
    return out;
}

EquivalenceReport verify_sh_equivalence(const ShTransferResult& r, const ShStructure& partial)
{
    EquivalenceReport out;
    const LieTransferResult& lie = r.lie;
    const auto& cce = lie.cce;
    for (auto& check : check_coalgebra_morphism(*lie.source, *cce.coalgebra, lie.tau_bar, lie.D.total(),
                                                cce.structure.total())
                           .checks) {
        check.name = "tau_bar: " + check.name;
        out.verdict.checks.push_back(std::move(check));
    }

    const SymCoalgebra& carrier = partial.carrier();
    GradedMap t = r.loop->twisting_cochain();
    GradedMap t_bar =
        coalgebra_morphism(carrier, *cce.coalgebra, compose(suspension_map(r.loop->module(), cce.coalgebra->generators()), t));
    for (auto& check :
         check_coalgebra_morphism(carrier, *cce.coalgebra, t_bar, partial.total(), cce.structure.total()).checks) {
        check.name = "t_L bar: " + check.name;
        out.verdict.checks.push_back(std::move(check));
    }
    if (lie.contraction)
        out.verdict.checks.push_back(compare("Pi tau_bar = Id", compose(lie.contraction->pi(), lie.tau_bar),
                                             GradedMap::identity(lie.source->module())));
    out.source_homology = nonzero_homology(lie.D.total());
    out.target_homology = nonzero_homology(cce.structure.total());
    out.base_homology = nonzero_homology(partial.total());
    return out;
}

} // namespace hpt
