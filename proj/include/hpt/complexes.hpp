#pragma once

#include "hpt/graded.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hpt {

// A graded module with a degree -1 square-zero differential.
class ChainComplex {
public:
    ChainComplex(ModulePtr module, GradedMap d);

    const ModulePtr& module() const { return module_; }
    const GradedMap& d() const { return d_; }

    static ChainComplex zero_differential(const ModulePtr& m);

private:
    ModulePtr module_;
    GradedMap d_;
};

// Filtration by a per-basis-element weight. Values are non-negative.
struct Filtration {
    std::vector<int> weight_of;

    static Filtration from_module_weights(const ModulePtr& m);
    int max() const;
};

// Largest value of weight(row) - weight(col) over the nonzero entries, or
// nullopt for the zero map. A map lowers the filtration iff this is < 0.
std::optional<int> weight_shift(const GradedMap& f, const Filtration& src, const Filtration& tgt);

struct IdentityCheck {
    IdentityCheck(std::string n = {}) : name(std::move(n)) {}
    std::string name;
    bool ok = true;
    std::optional<std::string> witness;  // label of the first failing basis element
};

struct Verdict {
    std::vector<IdentityCheck> checks;
    bool ok() const;
    std::string summary() const;
};

// Data (nabla: M -> N, pi: N -> M, h: N -> N of degree +1).
class Contraction {
public:
    // Checks nothing; use verify() or the factory functions below.
    Contraction(ChainComplex small, ChainComplex big, GradedMap nabla, GradedMap pi, GradedMap h);

    const ChainComplex& small() const { return small_; }
    const ChainComplex& big() const { return big_; }
    const GradedMap& nabla() const { return nabla_; }
    const GradedMap& pi() const { return pi_; }
    const GradedMap& h() const { return h_; }

    // The five identities: pi nabla = Id, Dh = Id - nabla pi, pi h = 0,
    // h nabla = 0, h h = 0, plus the chain-map properties of pi and nabla.
    Verdict verify() const;

    static Contraction identity(const ChainComplex& c);

private:
    ChainComplex small_;
    ChainComplex big_;
    GradedMap nabla_;
    GradedMap pi_;
    GradedMap h_;
};

// Throws InternalError naming the failed identity.
void require_valid(const Contraction& c, const std::string& context);

// Perturbation delta of the differential of `target`, lowering `filtration`.
struct Perturbation {
    GradedMap delta;
    Filtration filtration;
};

// h~ = P h P d P h P with P = Id - nabla pi; the result satisfies the side
// conditions. Input must satisfy pi nabla = Id and Dh = Id - nabla pi.
Contraction repair_side_conditions(const Contraction& c);

struct PerturbedContraction {
    Contraction contraction;  // small carries d_M + delta_M, big carries d_N + delta
    GradedMap delta_small;    // delta_M
};

// With A = sum_n (-delta h)^n delta:
//   delta_M = pi A nabla, nabla' = nabla - h A nabla,
//   pi' = pi - pi A h,    h' = h - h A h.
// The series is finite because delta lowers the filtration and h does not
// raise it. Output is verified exactly before it is returned.
PerturbedContraction basic_perturbation_lemma(const Contraction& c, const Perturbation& p);

// (c1: M <-> g, c2: g <-> L) -> M <-> L with pi = pi1 pi2, nabla = nabla2 nabla1,
// h = h2 + nabla2 h1 pi2.
Contraction compose_contractions(const Contraction& c1, const Contraction& c2);

// Builds h for given chain maps pi, nabla with pi nabla = Id, degree by
// degree: K = ker pi is split as Z + C with Z the cycles and C spanned by the
// earliest echelon vectors not in Z; h(z + c) = (d|C)^{-1}(z), h = 0 on
// im nabla. Throws NoContractionError if K has homology.
Contraction solve_contraction(const ChainComplex& small, const ChainComplex& big, const GradedMap& pi,
                              const GradedMap& nabla);

} // namespace hpt
