// fidelity.hpp — Uhlmann fidelity, its unnormalized extension, the fidelity
// between the information encoded in the protected subsystem in two states
// (closed form, canonical maximizers, operational measurement minimum), and
// the associated angles.

#pragma once

#include <utility>
#include <vector>

#include "subfid/spaces.hpp"

namespace subfid {

// ------------------------- fidelity on the full space ------------------------

// Tr sqrt(sqrt(tau) upsilon sqrt(tau)), evaluated as the nuclear norm of the
// product of rank-revealing PSD factors; clamped to [0, 1].
double uhlmann_fidelity(const Matrix& tau, const Matrix& upsilon);
double uhlmann_fidelity(const DensityOperator& tau, const DensityOperator& upsilon);

// Same functional over unnormalized positive operators. Homogeneous of
// degree 1/2 in each argument, not clamped.
double fcheck(const Matrix& p, const Matrix& q);
double fcheck(const PositiveOperator& p, const PositiveOperator& q);

// arccos of the fidelity (inputs clamped into [0, 1] first).
double angle(const DensityOperator& tau, const DensityOperator& upsilon);

// --------------------------- the subsystem measure ---------------------------

struct SubsystemFidelity {
    double total = 0.0;    // ab_term + k_term, clamped to [0, 1]
    double ab_term = 0.0;  // sqrt(w_ab(tau) w_ab(ups)) * F(tau_A, ups_A)
    double k_term = 0.0;   // sqrt(w_k(tau) w_k(ups))
};

// Closed form of the measure. Terms whose weights fall below kZeroWeightTol
// contribute zero (the limit of the weighted form).
SubsystemFidelity subsystem_fidelity_parts(const DensityOperator& tau, const DensityOperator& upsilon);
double subsystem_fidelity(const DensityOperator& tau, const DensityOperator& upsilon);

double subsystem_angle(const DensityOperator& tau, const DensityOperator& upsilon);

// The explicit block-diagonal states achieving the defining maximum:
//   tau* = Tr_B{P_AB tau P_AB} ⊗ |0_B><0_B| ⊕ Tr{P_K tau} |0_K><0_K|.
// Their full-space Uhlmann fidelity equals the subsystem measure.
std::pair<DensityOperator, DensityOperator> canonical_maximizers(const DensityOperator& tau,
                                                                 const DensityOperator& upsilon);

// Sampled lower-bound validator for the defining maximization: the maximum of
// uhlmann_fidelity over `samples` pairs drawn from random_state_same_reduced.
// Never exceeds the closed form (up to rounding); reaches it when
// include_canonical injects the canonical maximizers into the sample set.
double definition_oracle_bound(const DensityOperator& tau, const DensityOperator& upsilon,
                               int samples, const RngStream& rng, bool include_canonical = false);

// ----------------------------- measurements ----------------------------------

// Measurement of the form {P_K (optional), M_i^A ⊗ I_B}: the elements on the
// protected factor must be PSD and sum to I_A.
struct SubsystemPovm {
    SpaceDecomposition space;
    std::vector<Matrix> elements_on_a;
    bool include_k_outcome = true;
};

SubsystemPovm make_subsystem_povm(const SpaceDecomposition& space, std::vector<Matrix> elements_on_a,
                                  bool include_k_outcome = true);

// sum_i sqrt(p_tau(i) p_ups(i)) over the realized global outcomes. Never
// falls below the subsystem measure (up to rounding) when the complement
// outcome is included.
double povm_overlap(const SubsystemPovm& povm, const DensityOperator& tau,
                    const DensityOperator& upsilon);

// Measurement achieving the operational minimum: eigenprojectors of the
// geometric-mean operator of the normalized reduced states, computed on the
// support of tau_A via pseudo-inverse and completed by the kernel projector.
// Errors when either state has no weight on the code subspace.
SubsystemPovm optimal_subsystem_povm(const DensityOperator& tau, const DensityOperator& upsilon);

// Same construction on the full space, for the operational form of the plain
// fidelity: rank-one projectors plus the kernel projector of tau.
std::vector<Matrix> optimal_global_povm(const Matrix& tau, const Matrix& upsilon);

double global_povm_overlap(const std::vector<Matrix>& elements, const Matrix& tau,
                           const Matrix& upsilon);

}  // namespace subfid
