#include "hpt/symcoalg.hpp"

#include <algorithm>
#include <tuple>

namespace hpt {

void add_to(Vec2& v, int left, int right, const Rational& coef)
{
    if (is_zero(coef))
        return;
    auto [it, inserted] = v.try_emplace({left, right}, coef);
    if (!inserted) {
        it->second += coef;
        if (is_zero(it->second))
            v.erase(it);
    }
}

// Sign of moving the letters at positions in `mask` to the front, keeping
// relative order on both sides.
int unshuffle_sign(std::span<const int> degrees, unsigned mask)
{
    int exponent = 0;
    int odd_behind = 0;  // odd letters left behind so far
    for (std::size_t p = 0; p < degrees.size(); ++p) {
        const bool odd = parity(degrees[p]);
        if (mask >> p & 1u) {
            if (odd)
                exponent += odd_behind;
        } else if (odd) {
            ++odd_behind;
        }
    }
    return sign_of(exponent);
}

namespace {

std::vector<int> pick(const std::vector<int>& word, unsigned mask, bool inside)
{
    std::vector<int> out;
    for (std::size_t p = 0; p < word.size(); ++p)
        if (static_cast<bool>(mask >> p & 1u) == inside)
            out.push_back(word[p]);
    return out;
}

} // namespace

SymCoalgebra::SymCoalgebra(ModulePtr generators, int max_weight)
    : gens_(std::move(generators)), max_weight_(max_weight)
{
    if (max_weight_ < 1)
        throw ArgumentError("symmetric coalgebra: max_weight must be >= 1");
    for (const auto& b : gens_->basis())
        if (b.weight < 1)
            throw ArgumentError("symmetric coalgebra: generator " + b.label + " has weight < 1");

    std::vector<std::vector<int>> found;
    std::vector<int> current;
    auto grow = [&](auto&& self, int start, int weight) -> void {
        found.push_back(current);
        for (int g = start; g < gens_->size(); ++g) {
            const int w = weight + gens_->weight(g);
            if (w > max_weight_)
                continue;
            const bool odd = parity(gens_->degree(g));
            current.push_back(g);
            self(self, odd ? g + 1 : g, w);
            current.pop_back();
        }
    };
    grow(grow, 0, 0);

    auto weight_of = [&](const std::vector<int>& w) {
        int s = 0;
        for (int g : w)
            s += gens_->weight(g);
        return s;
    };
    std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
        return std::make_tuple(weight_of(a), a.size(), std::cref(a)) <
               std::make_tuple(weight_of(b), b.size(), std::cref(b));
    });

    std::vector<BasisElement> basis;
    gen_word_.assign(gens_->size(), -1);
    for (const auto& w : found) {
        const int i = static_cast<int>(words_.size());
        std::string label;
        int degree = 0;
        for (int g : w) {
            if (!label.empty())
                label += "*";
            label += gens_->label(g);
            degree += gens_->degree(g);
        }
        if (w.empty())
            label = "1";
        basis.push_back({label, degree, weight_of(w)});
        index_.emplace(w, i);
        if (w.size() == 1)
            gen_word_[w[0]] = i;
        words_.push_back(w);
    }
    module_ = make_module("Sc[" + gens_->name() + "]", std::move(basis));

    diag_.resize(words_.size());
    for (int i = 0; i < size(); ++i) {
        const auto& w = words_[i];
        std::vector<int> degs;
        for (int g : w)
            degs.push_back(gens_->degree(g));
        Vec2 acc;
        for (unsigned mask = 0; mask < (1u << w.size()); ++mask)
            add_to(acc, index_.at(pick(w, mask, true)), index_.at(pick(w, mask, false)),
                   unshuffle_sign(degs, mask));
        for (auto& [lr, c] : acc)
            diag_[i].push_back({c, lr.first, lr.second});
    }
}

std::optional<int> SymCoalgebra::find(const std::vector<int>& sorted_word) const
{
    auto it = index_.find(sorted_word);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::pair<int, int> SymCoalgebra::normalize(std::vector<int> letters) const
{
    int weight = 0;
    for (int g : letters)
        weight += gens_->weight(g);
    if (weight > max_weight_)
        throw TruncationError("word of weight " + std::to_string(weight) + " exceeds truncation " +
                              std::to_string(max_weight_));
    int sign = 1;
    for (std::size_t i = 1; i < letters.size(); ++i)
        for (std::size_t j = i; j > 0 && letters[j - 1] > letters[j]; --j) {
            if (parity(gens_->degree(letters[j - 1])) && parity(gens_->degree(letters[j])))
                sign = -sign;
            std::swap(letters[j - 1], letters[j]);
        }
    for (std::size_t i = 1; i < letters.size(); ++i)
        if (letters[i] == letters[i - 1] && parity(gens_->degree(letters[i])))
            return {0, 0};
    return {sign, index_.at(letters)};
}

std::pair<int, int> SymCoalgebra::multiply(int a, int b) const
{
    std::vector<int> letters = words_[a];
    letters.insert(letters.end(), words_[b].begin(), words_[b].end());
    return normalize(std::move(letters));
}

Vec SymCoalgebra::multiply(const Vec& a, const Vec& b) const
{
    Vec out;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b) {
            auto [s, k] = multiply(i, j);
            if (s)
                add_to(out, k, s * x * y);
        }
    return out;
}

Vec2 SymCoalgebra::diagonal(const Vec& v) const
{
    Vec2 out;
    for (const auto& [i, c] : v)
        for (const auto& sp : diag_[i])
            add_to(out, sp.left, sp.right, c * sp.coef);
    return out;
}

std::vector<SymCoalgebra::Split> SymCoalgebra::reduced_diagonal(int i) const
{
    std::vector<Split> out;
    for (const auto& sp : diag_[i])
        if (sp.left != 0 && sp.right != 0)
            out.push_back(sp);
    return out;
}

Filtration SymCoalgebra::filtration() const
{
    Filtration f;
    for (const auto& w : words_)
        f.weight_of.push_back(static_cast<int>(w.size()));
    return f;
}

GradedMap SymCoalgebra::projection() const
{
    GradedMap p(module_, gens_, 0);
    for (int g = 0; g < gens_->size(); ++g)
        if (gen_word_[g] >= 0)
            p.add_entry(g, gen_word_[g], 1);
    return p;
}

GradedMap SymCoalgebra::inclusion() const
{
    GradedMap p(gens_, module_, 0);
    for (int g = 0; g < gens_->size(); ++g)
        if (gen_word_[g] >= 0)
            p.add_entry(gen_word_[g], g, 1);
    return p;
}

Vec2 apply_tensor(const GradedMap& f, const GradedMap& g, const Vec2& x)
{
    Vec2 out;
    for (const auto& [lr, c] : x) {
        const int s = sign_of(g.degree() * f.source()->degree(lr.first));
        for (const auto& [i, a] : f.column(lr.first))
            for (const auto& [j, b] : g.column(lr.second))
                add_to(out, i, j, s * c * a * b);
    }
    return out;
}

Verdict check_coalgebra_axioms(const SymCoalgebra& c)
{
    const auto& m = c.module();
    IdentityCheck assoc{"coassociative"}, comm{"cocommutative"};
    for (int w = 0; w < c.size(); ++w) {
        std::map<std::tuple<int, int, int>, Rational> left, right;
        auto add3 = [](auto& acc, int a, int b, int d, const Rational& q) {
            auto& slot = acc[{a, b, d}];
            slot += q;
            if (is_zero(slot))
                acc.erase({a, b, d});
        };
        Vec2 flipped;
        for (const auto& sp : c.diagonal(w)) {
            for (const auto& inner : c.diagonal(sp.left))
                add3(left, inner.left, inner.right, sp.right, sp.coef * inner.coef);
            for (const auto& inner : c.diagonal(sp.right))
                add3(right, sp.left, inner.left, inner.right, sp.coef * inner.coef);
            add_to(flipped, sp.right, sp.left, sign_of(m->degree(sp.left) * m->degree(sp.right)) * sp.coef);
        }
        Vec2 plain = c.diagonal(Vec{{w, 1}});
        if (assoc.ok && left != right) {
            assoc.ok = false;
            assoc.witness = m->label(w);
        }
        if (comm.ok && flipped != plain) {
            comm.ok = false;
            comm.witness = m->label(w);
        }
    }
    return Verdict{{assoc, comm}};
}

GradedMap coderivation_from_corestrictions(const SymCoalgebra& c, const GradedMap& lambda)
{
    if (!same_module(lambda.source(), c.module()) || !same_module(lambda.target(), c.generators()))
        throw ArgumentError("corestriction must map " + c.module()->name() + " -> " + c.generators()->name());
    GradedMap out(c.module(), c.module(), lambda.degree());
    for (int w = 0; w < c.size(); ++w) {
        Vec col;
        for (const auto& sp : c.diagonal(w)) {
            if (sp.left == 0)
                continue;
            for (const auto& [g, a] : lambda.column(sp.left)) {
                auto [s, k] = c.multiply(c.generator_word(g), sp.right);
                if (s)
                    add_to(col, k, s * sp.coef * a);
            }
        }
        out.set_column(w, std::move(col));
    }
    return out;
}

GradedMap corestriction_of(const SymCoalgebra& c, const GradedMap& coderivation)
{
    return compose(c.projection(), coderivation);
}

GradedMap corestriction_part(const SymCoalgebra& c, const GradedMap& lambda, int k)
{
    GradedMap out(lambda.source(), lambda.target(), lambda.degree());
    for (int w = 0; w < c.size(); ++w)
        if (c.length(w) == k)
            out.set_column(w, lambda.column(w));
    return out;
}

IdentityCheck check_coderivation(const SymCoalgebra& c, const GradedMap& coder)
{
    IdentityCheck out{"coderivation"};
    GradedMap id = GradedMap::identity(c.module());
    for (int w = 0; w < c.size(); ++w) {
        Vec2 lhs = c.diagonal(coder.column(w));
        Vec2 base = c.diagonal(Vec{{w, 1}});
        Vec2 rhs = apply_tensor(coder, id, base);
        for (const auto& [lr, q] : apply_tensor(id, coder, base))
            add_to(rhs, lr.first, lr.second, q);
        if (lhs != rhs) {
            out.ok = false;
            out.witness = c.module()->label(w);
            break;
        }
    }
    return out;
}

ShStructure::ShStructure(std::shared_ptr<const SymCoalgebra> carrier, ChainComplex generators, GradedMap lambda)
    : carrier_(std::move(carrier)), gens_(std::move(generators)), lambda_(std::move(lambda)),
      d0_(carrier_->module(), carrier_->module(), -1), partial_(carrier_->module(), carrier_->module(), -1)
{
    if (!same_module(gens_.module(), carrier_->generators()))
        throw ArgumentError("sh structure: generator complex differs from the carrier's generators");
    if (lambda_.degree() != -1)
        throw ArgumentError("sh structure: corestriction must have degree -1");
    for (int w = 0; w < carrier_->size(); ++w)
        if (carrier_->length(w) <= 1 && !lambda_.column(w).empty())
            throw ArgumentError("sh structure: corestriction must vanish on words of length <= 1 (" +
                                carrier_->module()->label(w) + ")");
    d0_ = coderivation_from_corestrictions(*carrier_, compose(gens_.d(), carrier_->projection()));
    partial_ = coderivation_from_corestrictions(*carrier_, lambda_);
}

Verdict ShStructure::verify() const
{
    Verdict v;
    GradedMap t = total();
    IdentityCheck sq{"(d0 + partial)^2 = 0"};
    if (auto j = first_difference(compose(t, t), GradedMap::zero(t.source(), t.target(), -2))) {
        sq.ok = false;
        sq.witness = carrier_->module()->label(*j);
    }
    v.checks.push_back(sq);
    v.checks.push_back(check_coderivation(*carrier_, t));
    IdentityCheck low{"partial lowers word length"};
    Filtration f = carrier_->filtration();
    if (auto s = weight_shift(partial_, f, f); s && *s >= 0)
        low.ok = false;
    v.checks.push_back(low);
    return v;
}

void ShStructure::require_valid() const
{
    Verdict v = verify();
    if (!v.ok())
        throw PreconditionError("sh structure fails:\n" + v.summary());
}

GradedMap cup_product(const SymCoalgebra& c, const GradedMap& a, const GradedMap& b, const ModulePtr& target,
                      const BasisProduct& mu)
{
    GradedMap out(c.module(), target, a.degree() + b.degree());
    const auto& m = c.module();
    for (int w = 0; w < c.size(); ++w) {
        Vec col;
        for (const auto& sp : c.diagonal(w)) {
            const Vec& av = a.column(sp.left);
            const Vec& bv = b.column(sp.right);
            if (av.empty() || bv.empty())
                continue;
            const Rational coef = sign_of(b.degree() * m->degree(sp.left)) * sp.coef;
            for (const auto& [i, x] : av)
                for (const auto& [j, y] : bv)
                    axpy(col, coef * x * y, mu(i, j));
        }
        out.set_column(w, std::move(col));
    }
    return out;
}

GradedMap twisting_differential(const GradedMap& t, const GradedMap& d_c, const GradedMap& d_a)
{
    return compose(d_a, t) + compose(t, d_c);
}

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

} // namespace

IdentityCheck check_lie_twisting_cochain(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                         const GradedMap& d_target, const BasisProduct& bracket)
{
    GradedMap rhs = cup_bracket(c, t, t, t.target(), bracket);
    rhs *= Rational(1, 2);
    return compare("Dt = 1/2 [t, t]", twisting_differential(t, d_c, d_target), rhs);
}

IdentityCheck check_twisting_cochain(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                     const GradedMap& d_target, const BasisProduct& mu)
{
    return compare("Dt = t u t", twisting_differential(t, d_c, d_target), cup_product(c, t, t, t.target(), mu));
}

GradedMap coalgebra_morphism(const SymCoalgebra& src, const SymCoalgebra& tgt, const GradedMap& phi)
{
    if (!same_module(phi.source(), src.module()) || !same_module(phi.target(), tgt.generators()) ||
        phi.degree() != 0)
        throw ArgumentError("coalgebra_morphism: corestriction must be a degree 0 map " + src.module()->name() +
                            " -> " + tgt.generators()->name());
    if (!phi.column(0).empty())
        throw ArgumentError("coalgebra_morphism: corestriction must vanish on 1");
    GradedMap out(src.module(), tgt.module(), 0);
    const auto& gens = src.generators();
    // words are ordered by length within weight, so F(rest) is always known
    std::vector<Vec> f(src.size());
    f[0] = Vec{{0, 1}};
    for (int w = 1; w < src.size(); ++w) {
        const auto& word = src.word(w);
        std::vector<int> degs;
        for (int g : word)
            degs.push_back(gens->degree(g));
        const unsigned k = static_cast<unsigned>(word.size());
        Vec col;
        for (unsigned rest = 0; rest < (1u << (k - 1)); ++rest) {
            const unsigned mask = (rest << 1) | 1u;
            const int s = unshuffle_sign(degs, mask);
            const int block = *src.find(pick(word, mask, true));
            const int remainder = *src.find(pick(word, mask, false));
            const Vec& pv = phi.column(block);
            if (pv.empty())
                continue;
            Vec lead;
            for (const auto& [g, a] : pv)
                add_to(lead, tgt.generator_word(g), a);
            axpy(col, Rational(s), tgt.multiply(lead, f[remainder]));
        }
        f[w] = col;
        out.set_column(w, std::move(col));
    }
    out.set_column(0, f[0]);
    return out;
}

GradedMap symmetric_power(const SymCoalgebra& src, const SymCoalgebra& tgt, const GradedMap& f)
{
    return coalgebra_morphism(src, tgt, compose(f, src.projection()));
}

Verdict check_coalgebra_morphism(const SymCoalgebra& src, const SymCoalgebra& tgt, const GradedMap& f,
                                 const GradedMap& d_src, const GradedMap& d_tgt)
{
    Verdict v;
    IdentityCheck diag{"Delta F = (F (x) F) Delta"}, counit{"F preserves 1 and the counit"};
    for (int w = 0; w < src.size(); ++w) {
        Vec2 lhs = tgt.diagonal(f.column(w));
        Vec2 rhs = apply_tensor(f, f, src.diagonal(Vec{{w, 1}}));
        if (diag.ok && lhs != rhs) {
            diag.ok = false;
            diag.witness = src.module()->label(w);
        }
        const bool unit_ok = w == 0 ? f.column(0) == Vec{{0, 1}} : !f.column(w).contains(0);
        if (counit.ok && !unit_ok) {
            counit.ok = false;
            counit.witness = src.module()->label(w);
        }
    }
    v.checks.push_back(diag);
    v.checks.push_back(counit);
    v.checks.push_back(compare("F d = d F", compose(f, d_src), compose(d_tgt, f)));
    return v;
}

} // namespace hpt
