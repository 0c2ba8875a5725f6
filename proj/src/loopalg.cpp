#include "hpt/loopalg.hpp"

#include "hpt/linalg.hpp"

namespace hpt {

namespace {

ModulePtr cobar_generators(const SymCoalgebra& c, int max_weight, std::vector<int>& gen_of_word,
                           std::vector<int>& word_of_gen)
{
    const auto& m = c.module();
    std::vector<BasisElement> basis;
    gen_of_word.assign(c.size(), -1);
    for (int w = 1; w < c.size(); ++w) {
        if (m->weight(w) > max_weight)
            continue;
        gen_of_word[w] = static_cast<int>(basis.size());
        word_of_gen.push_back(w);
        basis.push_back({"<" + m->label(w) + ">", m->degree(w) - 1, m->weight(w)});
    }
    return make_module("s-J" + m->name(), std::move(basis));
}

} // namespace

Cobar::Cobar(std::shared_ptr<const SymCoalgebra> base, GradedMap d_base, int max_weight)
    : base_(std::move(base)), d_base_(std::move(d_base)),
      tensor_(std::make_shared<const TensorAlgebra>(cobar_generators(*base_, max_weight, gen_of_word_, word_of_gen_),
                                                    max_weight)),
      d_(tensor_->module(), tensor_->module(), -1), d_delta_(tensor_->module(), tensor_->module(), -1)
{
    if (!same_module(d_base_.source(), base_->module()) || !same_module(d_base_.target(), base_->module()) ||
        d_base_.degree() != -1)
        throw ArgumentError("cobar: differential must be a degree -1 self-map of " + base_->module()->name());
    d_ = linear_part(d_base_);

    const auto& t = *tensor_;
    const auto& m = base_->module();
    GradedMap quad(generators(), t.module(), -1);
    for (int y = 0; y < generators()->size(); ++y) {
        Vec col;
        for (const auto& sp : base_->reduced_diagonal(word_of_gen_[y])) {
            const int a = gen_of_word_[sp.left], b = gen_of_word_[sp.right];
            if (a < 0 || b < 0)
                continue;
            if (auto k = t.concat(t.generator_word(a), t.generator_word(b)))
                add_to(col, *k, sign_of(m->degree(sp.left)) * sp.coef);
        }
        quad.set_column(y, std::move(col));
    }
    d_delta_ = t.derivation(quad);
}

GradedMap Cobar::linear_part(const GradedMap& f) const
{
    const auto& t = *tensor_;
    GradedMap on_gens(generators(), t.module(), f.degree());
    for (int y = 0; y < generators()->size(); ++y) {
        Vec col;
        for (const auto& [w, c] : f.column(word_of_gen_[y])) {
            if (w == 0)
                throw ArgumentError("cobar: map does not preserve the coaugmentation coideal");
            const int g = gen_of_word_[w];
            if (g < 0)
                throw TruncationError("cobar: image of " + generators()->label(y) + " past the truncation");
            add_to(col, t.generator_word(g), -c);
        }
        on_gens.set_column(y, std::move(col));
    }
    return t.derivation(on_gens);
}

IdentityCheck Cobar::check_square_zero() const
{
    IdentityCheck out{"(d + d_Delta)^2 = 0"};
    GradedMap tot = total();
    if (auto j = first_difference(compose(tot, tot), GradedMap::zero(tot.source(), tot.target(), -2))) {
        out.ok = false;
        out.witness = tot.source()->label(*j);
    }
    return out;
}

LoopLie::LoopLie(std::shared_ptr<const Cobar> cobar)
    : cobar_(std::move(cobar)), free_(std::make_shared<const FreeLie>(cobar_->tensor_ptr())),
      d_(free_->restrict(cobar_->d())), d_delta_(free_->restrict(cobar_->d_delta()))
{
}

GradedMap LoopLie::linear_part(const GradedMap& f) const
{
    return free_->restrict(cobar_->linear_part(f));
}

DGLie LoopLie::lie(const GradedMap& extra) const
{
    return free_dg_lie(free_, total() + extra);
}

DGLie LoopLie::lie() const
{
    return free_dg_lie(free_, total());
}

int LoopLie::lie_generator(int word) const
{
    const int g = cobar_->generator_of(word);
    return g < 0 ? -1 : free_->generator_index(g);
}

GradedMap LoopLie::twisting_cochain() const
{
    const auto& c = cobar_->base();
    GradedMap t(c.module(), module(), -1);
    for (int w = 1; w < c.size(); ++w)
        if (int i = lie_generator(w); i >= 0)
            t.add_entry(i, w, 1);
    return t;
}

IsoReport cobar_iso_check(const LoopLie& l)
{
    IsoReport report;
    const auto& t = l.cobar().tensor();
    SymCoalgebra sym(l.module(), t.max_weight());
    GradedMap e = poincare_symmetrization(l.free(), sym);

    std::map<std::pair<int, int>, std::vector<Vec>> images;
    for (int k = 0; k < sym.size(); ++k)
        images[{sym.module()->degree(k), sym.module()->weight(k)}].push_back(e.column(k));
    std::map<std::pair<int, int>, int> tdims;
    for (int k = 0; k < t.size(); ++k)
        ++tdims[{t.module()->degree(k), t.module()->weight(k)}];
    IdentityCheck bij{"symmetrization bijective per (degree, weight)"};
    for (const auto& [key, dim] : tdims) {
        auto it = images.find(key);
        const int r = it == images.end() ? 0 : rank_of(it->second);
        const int count = it == images.end() ? 0 : static_cast<int>(it->second.size());
        report.ranks[key] = {r, dim};
        if (bij.ok && (r != dim || count != dim)) {
            bij.ok = false;
            bij.witness = "(" + std::to_string(key.first) + ", " + std::to_string(key.second) + ")";
        }
    }
    report.verdict.checks.push_back(bij);

    GradedMap d_sym = coderivation_from_corestrictions(sym, compose(l.total(), sym.projection()));
    IdentityCheck chain{"e d = d e"};
    if (auto j = first_difference(compose(e, d_sym), compose(l.cobar().total(), e))) {
        chain.ok = false;
        chain.witness = sym.module()->label(*j);
    }
    report.verdict.checks.push_back(chain);
    return report;
}

GradedMap loop_lie_functor(const LoopLie& src, const LoopLie& tgt, const GradedMap& f)
{
    const auto& c = src.cobar().base();
    const auto& c2 = tgt.cobar().base();
    if (!same_module(f.source(), c.module()) || !same_module(f.target(), c2.module()) || f.degree() != 0)
        throw ArgumentError("loop_lie_functor: need a degree 0 map between the base coalgebras");
    Verdict v = check_coalgebra_morphism(c, c2, f, src.cobar().base_differential(), tgt.cobar().base_differential());
    if (!v.ok())
        throw PreconditionError("loop_lie_functor: not a dg coalgebra morphism\n" + v.summary());

    const auto& ta = src.cobar().tensor();
    const auto& tb = tgt.cobar().tensor();
    GradedMap on_gens(ta.generators(), tb.module(), 0);
    for (int y = 0; y < ta.generators()->size(); ++y) {
        const int w = src.cobar().word_of(y);
        Vec col;
        for (const auto& [w2, q] : f.column(w)) {
            if (w2 == 0)
                continue;
            if (c2.module()->weight(w2) > c.module()->weight(w))
                throw TruncationError("loop_lie_functor: morphism raises weight at " + c.module()->label(w));
            const int g = tgt.cobar().generator_of(w2);
            if (g < 0)
                throw TruncationError("loop_lie_functor: image past the truncation");
            add_to(col, tb.generator_word(g), q);
        }
        on_gens.set_column(y, std::move(col));
    }
    GradedMap on_tensor = ta.algebra_morphism(on_gens, tb);
    const FreeLie& la = src.free();
    const FreeLie& lb = tgt.free();
    GradedMap out(la.module(), lb.module(), 0);
    for (int i = 0; i < la.size(); ++i) {
        auto coords = lb.coordinates(on_tensor.apply(la.element(i)));
        if (!coords)
            throw InternalError("loop_lie_functor: image of " + la.module()->label(i) + " leaves L");
        out.set_column(i, std::move(*coords));
    }
    return out;
}

} // namespace hpt
