#pragma once

#include "hpt/loopalg.hpp"

#include <memory>
#include <optional>

namespace hpt {

// s f s^{-1} on suspended modules: (s f s^{-1})(s x) = (-1)^{|f|} s f(x).
GradedMap shifted_map(const GradedMap& f, const ModulePtr& s_source, const ModulePtr& s_target);

// The symmetrized tensor-trick homotopy on S^c[V] for a contraction of V with
// projector p = nabla pi (degree 0) and homotopy h (degree +1):
//   w = v1...vk -> (1/k!) sum_sigma eps(sigma) sum_i (-1)^{|v_s1|+...+|v_s(i-1)|}
//                  p v_s1 ... p v_s(i-1) . h v_si . v_s(i+1) ... v_sk.
GradedMap symmetric_homotopy(const SymCoalgebra& c, const GradedMap& p, const GradedMap& h);

// The contraction S^c[sM] <-> S^c[sg] built from c: S^c[s nabla],
// S^c[s pi] and the repaired symmetric homotopy.
Contraction symmetric_contraction(const Contraction& c, std::shared_ptr<const SymCoalgebra> small,
                                  std::shared_ptr<const SymCoalgebra> big);

struct LieTransferResult {
    int max_weight;
    std::shared_ptr<const SymCoalgebra> source;  // S^c[sM]
    ShStructure D;                               // transferred structure
    GradedMap tau;                               // S^c_D[sM] -> g, degree -1
    CCECoalgebra cce;                            // C[g]
    GradedMap tau_bar;                           // adjoint of tau, S^c_D[sM] -> C[g]

    // Filled by lie_transfer_contraction.
    std::optional<Contraction> symmetric;  // S^c[sM] <-> S^c[sg]
    std::optional<GradedMap> delta;        // perturbation of d^0 on S^c[sM]
    std::optional<Contraction> tilde;      // S^c_delta[sM] <-> C[g]
    std::optional<GradedMap> phi;          // Pi~ tau_bar
    std::optional<GradedMap> phi_inverse;
    std::optional<Contraction> contraction;  // S^c_D[sM] <-> C[g] with nabla = tau_bar
};

// tau_1 = nabla s^{-1}; on words of length k >= 2, with A_k = 1/2 [tau, tau]
// there: tau_k = h A_k and the corestriction of D is s pi A_k. The result is
// verified (master equation, pi tau = tau_M, h tau = 0, D a coalgebra
// perturbation, tau_bar a dg coalgebra morphism); a failure is an
// InternalError. Throws PreconditionError for an invalid contraction or Lie
// algebra, ArgumentError for N < 2 or mismatched modules.
LieTransferResult lie_transfer(const Contraction& c, const DGLie& g, int max_weight);

Verdict verify_lie_transfer(const LieTransferResult& r, const Contraction& c, const DGLie& g);

// Perturbs the symmetric contraction by the CCE differential, then
// Pi = Phi^{-1} Pi~ and H = H~ - H~ tau_bar Pi. Verified before returning.
void lie_transfer_contraction(LieTransferResult& r, const Contraction& c, const DGLie& g);

struct ShTransferResult {
    std::shared_ptr<const LoopLie> loop;  // L S^c[sg], from d^0
    GradedMap partial_loop;               // induced by the sh structure
    DGLie loop_lie;                       // L S^c_partial[sg]
    Contraction loop_contraction;         // g <-> L S^c[sg]
    Contraction perturbed_loop;           // g <-> L S^c_partial[sg]
    Contraction composite;                // M <-> L S^c_partial[sg]
    LieTransferResult lie;                // transfer along composite
};

// Transfer of an sh-Lie structure on g along c. The carrier of `partial`
// must be S^c[sg] (suspended differential of c.big()) truncated at >= N.
ShTransferResult sh_transfer(const Contraction& c, const ShStructure& partial, int max_weight,
                             bool with_contraction = true);

struct ThetaResult {
    std::shared_ptr<const LoopLie> loop;  // L S^c_D[sM]
    GradedMap theta;                      // C[g] -> L S^c_D[sM], degree -1
};

// theta = t_L Pi + 1/2 [theta, theta] H, by iteration to the fixed point.
// Needs the contraction (lie_transfer_contraction) and M, g connected: all
// basis degrees of each strictly positive or all strictly negative
// (PreconditionError otherwise).
ThetaResult theta_recursion(const LieTransferResult& r, const Contraction& c, const DGLie& g);

// An augmented algebra with unit basis element `unit`.
struct Algebra {
    ModulePtr module;
    GradedMap d;
    BasisProduct mu;
    int unit;
};

struct HomotopyResult {
    GradedMap h;
    Verdict verdict;  // D h = t1 u h - h u t2, h nabla = h_B, eps h eta = eps eta
};

// Data: a contraction B <-> C (B small) with nabla a coalgebra morphism,
// ordinary twisting cochains t1, t2: C -> A and h_B: t1 nabla ~ t2 nabla.
// h_C = h_B pi - (t1 u h_C - h_C u t2) H by iteration. Throws
// PreconditionError when nabla is not a dg coalgebra morphism or h_B fails
// D h_B = (t1 nabla) u h_B - h_B u (t2 nabla) or the normalization.
HomotopyResult homotopy_recursion(const SymCoalgebra& b, const SymCoalgebra& c, const Contraction& bc,
                                  const Algebra& a, const GradedMap& t1, const GradedMap& t2,
                                  const GradedMap& h_b);

// eta epsilon: C -> A, 1 -> unit.
GradedMap unit_map(const SymCoalgebra& c, const Algebra& a);

struct EquivalenceReport {
    Verdict verdict;
    std::map<int, int> source_homology;  // S^c_D[sM]
    std::map<int, int> target_homology;  // C[L S^c_partial[sg]]
    std::map<int, int> base_homology;    // S^c_partial[sg]
};

// tau_bar and the adjoint of t_L are dg coalgebra morphisms, Pi tau_bar = Id,
// and the nonzero homology ranks of the three coalgebras.
EquivalenceReport verify_sh_equivalence(const ShTransferResult& r, const ShStructure& partial);

} // namespace hpt
