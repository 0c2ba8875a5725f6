#pragma once

#include "hpt/freelie.hpp"

#include <memory>

namespace hpt {

// The cobar construction Omega C = T[s^{-1} J C] on a truncated symmetric
// coalgebra C with differential d_C. Generators are the desuspended nonempty
// words of weight <= N, labelled <w>, with degree |w| - 1 and weight that of
// w. On generators
//   d(s^{-1} c)       = -s^{-1}(d_C c),
//   d_Delta(s^{-1} c) = sum (-1)^{|c'|} s^{-1} c' s^{-1} c''  over the reduced diagonal,
// both extended as derivations.
class Cobar {
public:
    Cobar(std::shared_ptr<const SymCoalgebra> base, GradedMap d_base, int max_weight);

    const SymCoalgebra& base() const { return *base_; }
    const std::shared_ptr<const SymCoalgebra>& base_ptr() const { return base_; }
    const GradedMap& base_differential() const { return d_base_; }
    const TensorAlgebra& tensor() const { return *tensor_; }
    const std::shared_ptr<const TensorAlgebra>& tensor_ptr() const { return tensor_; }
    const ModulePtr& generators() const { return tensor_->generators(); }

    // Generator s^{-1} w, or -1 if w is 1 or past the truncation.
    int generator_of(int word) const { return gen_of_word_[word]; }
    int word_of(int generator) const { return word_of_gen_[generator]; }

    // Linear part induced by a (co)derivation f of C: s^{-1} c -> -s^{-1} f(c),
    // extended as a derivation. linear_part(d_C) is d.
    GradedMap linear_part(const GradedMap& f) const;

    const GradedMap& d() const { return d_; }
    const GradedMap& d_delta() const { return d_delta_; }
    GradedMap total() const { return d_ + d_delta_; }

    // (d + d_Delta)^2 = 0.
    IdentityCheck check_square_zero() const;

private:
    std::shared_ptr<const SymCoalgebra> base_;
    GradedMap d_base_;
    std::vector<int> gen_of_word_;
    std::vector<int> word_of_gen_;
    std::shared_ptr<const TensorAlgebra> tensor_;
    GradedMap d_;
    GradedMap d_delta_;
};

// The loop Lie algebra: the free Lie algebra on s^{-1} J C with the
// restriction of the cobar differential. Construction verifies that both
// parts of the differential preserve L (InternalError otherwise).
class LoopLie {
public:
    explicit LoopLie(std::shared_ptr<const Cobar> cobar);

    const Cobar& cobar() const { return *cobar_; }
    const FreeLie& free() const { return *free_; }
    const std::shared_ptr<const FreeLie>& free_ptr() const { return free_; }
    const ModulePtr& module() const { return free_->module(); }

    const GradedMap& d() const { return d_; }
    const GradedMap& d_delta() const { return d_delta_; }
    GradedMap total() const { return d_ + d_delta_; }
    // Restriction of cobar.linear_part(f) to L.
    GradedMap linear_part(const GradedMap& f) const;

    // The dg Lie algebra (L, d + d_Delta + extra).
    DGLie lie(const GradedMap& extra) const;
    DGLie lie() const;

    // t_L: C -> L, c -> s^{-1} c on J C, zero on 1. Degree -1.
    GradedMap twisting_cochain() const;

    // Generator index in L of s^{-1} w.
    int lie_generator(int word) const;

private:
    std::shared_ptr<const Cobar> cobar_;
    std::shared_ptr<const FreeLie> free_;
    GradedMap d_;
    GradedMap d_delta_;
};

// U[L C] = Omega C: the symmetrization S[L] -> T is bijective per (degree,
// weight) and commutes with the differentials (d on S[L] induced by the
// differential of L). The note lists the ranks.
struct IsoReport {
    Verdict verdict;
    std::map<std::pair<int, int>, std::pair<int, int>> ranks;  // (degree, weight) -> (rank of e, dim T)
};
IsoReport cobar_iso_check(const LoopLie& l);

// L(f) for a coalgebra morphism f: C -> C' (degree 0, preserving 1 and the
// differentials): s^{-1} c -> s^{-1} J f(c) on generators, extended as an
// algebra morphism and restricted to L. f must not raise weight. Throws
// PreconditionError if f is not a dg coalgebra morphism.
GradedMap loop_lie_functor(const LoopLie& src, const LoopLie& tgt, const GradedMap& f);

} // namespace hpt
