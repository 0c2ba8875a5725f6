#pragma once

#include "hpt/complexes.hpp"
#include "hpt/graded.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace hpt {

// Element of C (x) C, keyed by (left index, right index).
using Vec2 = std::map<std::pair<int, int>, Rational>;

void add_to(Vec2& v, int left, int right, const Rational& coef);

// Sign of moving the letters at the positions in `mask` to the front,
// keeping the relative order on both sides.
int unshuffle_sign(std::span<const int> degrees, unsigned mask);

// Bilinear operation given on basis elements: (i, j) -> i * j in the target.
using BasisProduct = std::function<Vec(int, int)>;

// The cofree cocommutative coalgebra S^c[W] on a graded module W of
// generators, truncated at total generator weight N. Basis: sorted words
// (multisets) in the generators; odd generators occur at most once. Word 0
// is the empty word 1. Words are ordered by weight, then length, then
// lexicographically.
class SymCoalgebra {
public:
    SymCoalgebra(ModulePtr generators, int max_weight);

    const ModulePtr& generators() const { return gens_; }
    const ModulePtr& module() const { return module_; }
    int max_weight() const { return max_weight_; }
    int size() const { return module_->size(); }

    const std::vector<int>& word(int i) const { return words_[i]; }
    int length(int i) const { return static_cast<int>(words_[i].size()); }
    std::optional<int> find(const std::vector<int>& sorted_word) const;
    int generator_word(int g) const { return gen_word_[g]; }

    // Brings a sequence of generators into normal form: (sign, index) with
    // sign 0 if the word vanishes. Throws TruncationError past max_weight.
    std::pair<int, int> normalize(std::vector<int> letters) const;
    std::pair<int, int> multiply(int a, int b) const;
    Vec multiply(const Vec& a, const Vec& b) const;

    struct Split {
        Rational coef;
        int left;
        int right;
    };
    // Delta(w) = sum over position subsets I of eps(I, J) w_I (x) w_J, with
    // equal terms merged.
    const std::vector<Split>& diagonal(int i) const { return diag_[i]; }
    Vec2 diagonal(const Vec& v) const;
    // Reduced diagonal: the splits with both parts nonempty.
    std::vector<Split> reduced_diagonal(int i) const;

    // Word length, i.e. the coaugmentation filtration.
    Filtration filtration() const;

    // C -> W onto length one words, and W -> C.
    GradedMap projection() const;
    GradedMap inclusion() const;

private:
    ModulePtr gens_;
    ModulePtr module_;
    int max_weight_;
    std::vector<std::vector<int>> words_;
    std::map<std::vector<int>, int> index_;
    std::vector<int> gen_word_;
    std::vector<std::vector<Split>> diag_;
};

// (f (x) g) applied to an element of C (x) C, with the Koszul sign.
Vec2 apply_tensor(const GradedMap& f, const GradedMap& g, const Vec2& x);

// Coassociativity and cocommutativity on every basis word.
Verdict check_coalgebra_axioms(const SymCoalgebra& c);

// The coderivation mu (lambda (x) Id) Delta with corestriction lambda: C -> W.
GradedMap coderivation_from_corestrictions(const SymCoalgebra& c, const GradedMap& lambda);
// proj o D.
GradedMap corestriction_of(const SymCoalgebra& c, const GradedMap& coderivation);
// Restriction of a corestriction to the words of length k.
GradedMap corestriction_part(const SymCoalgebra& c, const GradedMap& lambda, int k);

// Delta D = (D (x) Id + Id (x) D) Delta.
IdentityCheck check_coderivation(const SymCoalgebra& c, const GradedMap& coder);

// A coalgebra perturbation of the differential d^0 induced by the
// differential of the generators. The corestriction lambda must vanish on
// words of length <= 1.
class ShStructure {
public:
    ShStructure(std::shared_ptr<const SymCoalgebra> carrier, ChainComplex generators, GradedMap lambda);

    const SymCoalgebra& carrier() const { return *carrier_; }
    const std::shared_ptr<const SymCoalgebra>& carrier_ptr() const { return carrier_; }
    const ChainComplex& generators() const { return gens_; }
    const GradedMap& lambda() const { return lambda_; }
    GradedMap lambda_k(int k) const { return corestriction_part(*carrier_, lambda_, k); }

    const GradedMap& d0() const { return d0_; }
    const GradedMap& perturbation() const { return partial_; }
    GradedMap total() const { return d0_ + partial_; }

    // (d^0 + partial)^2 = 0, coderivation property, filtration lowering.
    Verdict verify() const;
    // Throws PreconditionError naming the first failing check.
    void require_valid() const;

private:
    std::shared_ptr<const SymCoalgebra> carrier_;
    ChainComplex gens_;
    GradedMap lambda_;
    GradedMap d0_;
    GradedMap partial_;
};

// (a u b)(w) = sum eps(I, J) (-1)^{|b||w_I|} mu(a(w_I), b(w_J)).
GradedMap cup_product(const SymCoalgebra& c, const GradedMap& a, const GradedMap& b, const ModulePtr& target,
                      const BasisProduct& mu);
// Same formula with the bracket in place of mu.
inline GradedMap cup_bracket(const SymCoalgebra& c, const GradedMap& a, const GradedMap& b,
                             const ModulePtr& target, const BasisProduct& bracket)
{
    return cup_product(c, a, b, target, bracket);
}

// D t = d_A t + t d_C for t of degree -1.
GradedMap twisting_differential(const GradedMap& t, const GradedMap& d_c, const GradedMap& d_a);

// D t = 1/2 [t, t]. Witness: first failing basis word.
IdentityCheck check_lie_twisting_cochain(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                         const GradedMap& d_target, const BasisProduct& bracket);
// D t = t u t.
IdentityCheck check_twisting_cochain(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                     const GradedMap& d_target, const BasisProduct& mu);

// The coalgebra morphism src -> tgt with corestriction phi (degree 0, into
// the generators of tgt, vanishing on 1):
//   F(1) = 1, F(w) = sum over blocks B containing the first letter of w of
//   eps(B, rest) phi(w_B) F(w_rest).
// This is the sum over k of (1/k!) phi^{u k}.
GradedMap coalgebra_morphism(const SymCoalgebra& src, const SymCoalgebra& tgt, const GradedMap& phi);

// S^c[f] for a degree 0 map f of generators.
GradedMap symmetric_power(const SymCoalgebra& src, const SymCoalgebra& tgt, const GradedMap& f);

// Delta F = (F (x) F) Delta, epsilon F = epsilon, F d_src = d_tgt F.
Verdict check_coalgebra_morphism(const SymCoalgebra& src, const SymCoalgebra& tgt, const GradedMap& f,
                                 const GradedMap& d_src, const GradedMap& d_tgt);

} // namespace hpt
