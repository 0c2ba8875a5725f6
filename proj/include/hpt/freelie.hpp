#pragma once

#include "hpt/linalg.hpp"
#include "hpt/symcoalg.hpp"

#include <climits>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

namespace hpt {

// Tensor algebra T[Y] truncated at total generator weight N. Basis: words
// (sequences of generator indices), word 0 empty, ordered by weight, then
// length, then lexicographically. Labels join generator labels with '|'.
class TensorAlgebra {
public:
    TensorAlgebra(ModulePtr generators, int max_weight);

    const ModulePtr& generators() const { return gens_; }
    const ModulePtr& module() const { return module_; }
    int max_weight() const { return max_weight_; }
    int size() const { return module_->size(); }

    const std::vector<int>& word(int i) const { return words_[i]; }
    std::optional<int> find(const std::vector<int>& word) const;
    int generator_word(int g) const { return gen_word_[g]; }

    // Concatenation; nullopt past the truncation.
    std::optional<int> concat(int a, int b) const;
    // Product with everything past the truncation dropped.
    Vec multiply(const Vec& a, const Vec& b) const;
    // a b - (-1)^{|a||b|} b a for homogeneous a, b of the given degrees.
    Vec commutator(const Vec& a, int deg_a, const Vec& b, int deg_b) const;

    // Extension of f: Y -> T (any degree r) as a derivation:
    // D(y1...yk) = sum_i (-1)^{r(|y1|+...+|y_{i-1}|)} y1...D(yi)...yk.
    GradedMap derivation(const GradedMap& on_generators) const;
    // Extension of a degree 0 map f: Y -> T' as an algebra morphism.
    GradedMap algebra_morphism(const GradedMap& on_generators, const TensorAlgebra& target) const;

    // Shuffle diagonal (generators primitive), merged.
    Vec2 diagonal(const Vec& v) const;

private:
    ModulePtr gens_;
    ModulePtr module_;
    int max_weight_;
    std::vector<std::vector<int>> words_;
    std::map<std::vector<int>, int> index_;
    std::vector<int> gen_word_;
};

// The free graded Lie algebra L[Y] inside T[Y], truncated at the same total
// weight: brackets landing past the truncation are zero, i.e. this is
// L[Y] modulo the elements of weight > N. Basis: standard bracketings of
// Lyndon words together with the squares [P(l), P(l)] of odd Lyndon words,
// ordered by degree, weight, then word. Independence and spanning are
// verified against the right-normed brackets at construction.
class FreeLie {
public:
    explicit FreeLie(std::shared_ptr<const TensorAlgebra> ambient);

    const TensorAlgebra& ambient() const { return *ambient_; }
    const std::shared_ptr<const TensorAlgebra>& ambient_ptr() const { return ambient_; }
    const ModulePtr& module() const { return module_; }
    int size() const { return module_->size(); }

    // Basis element i as an element of T[Y].
    const Vec& element(int i) const { return elements_[i]; }
    // The super-Lyndon word underlying basis element i.
    const std::vector<int>& word(int i) const { return lyndon_[i]; }
    int generator_index(int g) const { return gen_index_[g]; }

    // Coordinates of an element of T[Y] in the basis, if it lies in L[Y].
    std::optional<Vec> coordinates(const Vec& t) const;

    // [e_i, e_j] in coordinates (memoized).
    const Vec& bracket(int i, int j) const;
    Vec bracket(const Vec& a, const Vec& b) const;
    BasisProduct product() const;

    // j: L -> T.
    GradedMap inclusion() const;

    // Restriction of a map T -> T to L. Throws InternalError naming the first
    // basis element whose image leaves L.
    GradedMap restrict(const GradedMap& on_tensor) const;
    // Whether f(L) lies in L; witness is the first basis element that fails.
    IdentityCheck closed_under(const GradedMap& on_tensor) const;

    // Dimension of L per (degree, weight).
    std::map<std::pair<int, int>, int> dimensions() const;

private:
    std::shared_ptr<const TensorAlgebra> ambient_;
    ModulePtr module_;
    std::vector<Vec> elements_;
    std::vector<std::vector<int>> lyndon_;
    std::vector<int> gen_index_;
    Echelon echelon_;
    mutable std::map<std::pair<int, int>, Vec> cache_;
};

using StructureConstants = std::vector<std::tuple<int, int, int, Rational>>;

// Bracket table from structure constants (i, j, k, c): [e_i, e_j] has
// e_k-coefficient c. Pairs (j, i) not listed follow by graded antisymmetry.
// Degree mismatches and bad indices throw ArgumentError; nothing else is
// checked.
BasisProduct structure_constants(const ModulePtr& m, const StructureConstants& constants);

// A dg Lie algebra: a chain complex with a degree 0 bracket on the basis.
// Brackets of basis elements whose weights sum past `weight_limit` vanish.
class DGLie {
public:
    // From structure constants; the axioms are checked and ArgumentError
    // names the first failure.
    DGLie(ChainComplex complex, const StructureConstants& constants);
    // Unchecked; call verify().
    DGLie(ChainComplex complex, BasisProduct bracket, int weight_limit = INT_MAX);

    const ChainComplex& complex() const { return complex_; }
    const ModulePtr& module() const { return complex_.module(); }
    const GradedMap& d() const { return complex_.d(); }
    const BasisProduct& bracket() const { return bracket_; }
    Vec bracket(const Vec& a, const Vec& b) const;
    int weight_limit() const { return weight_limit_; }

    // Graded antisymmetry, Jacobi [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]],
    // and d[x,y] = [dx,y] + (-1)^{|x|}[x,dy], on all basis pairs and triples
    // within the weight limit. Witnesses name the offending labels.
    Verdict verify() const;

    bool is_abelian() const;

private:
    ChainComplex complex_;
    BasisProduct bracket_;
    int weight_limit_;
};

DGLie free_dg_lie(std::shared_ptr<const FreeLie> lie, const GradedMap& d_on_lie);

// The CCE coalgebra C[h] = S^c_partial[sh] and the universal twisting
// cochain tau_h = s^{-1} proj, with partial determined by tau_h partial = 1/2 [tau_h, tau_h].
struct CCECoalgebra {
    std::shared_ptr<const SymCoalgebra> coalgebra;
    ShStructure structure;
    GradedMap tau;
};

CCECoalgebra cce_coalgebra(const DGLie& h, int max_weight);

// D t = 1/2 [t, t] for t: C -> h.
IdentityCheck check_master_equation(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                    const DGLie& h);

// The coalgebra morphism C -> C[h] adjoint to a Lie twisting cochain t
// (corestriction s t). Throws PreconditionError if t fails the master equation.
GradedMap adjoint_coalgebra_morphism(const SymCoalgebra& c, const GradedMap& d_c, const GradedMap& t,
                                     const DGLie& h, const CCECoalgebra& target);

// e(x1...xn) = (1/n!) sum_sigma koszul(sigma) j(x_sigma1)...j(x_sigman) from
// the symmetric coalgebra on L (unsuspended, weights from L) to T[Y].
GradedMap poincare_symmetrization(const FreeLie& lie, const SymCoalgebra& sym);

} // namespace hpt
