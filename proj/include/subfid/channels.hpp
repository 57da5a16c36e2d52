// channels.hpp — Kraus channels, the block-structured channels that leave the
// protected factor noiseless, the initialization-free subclass, block-local
// product channels, computation channels, and the leak-term identity.

#pragma once

#include <string>
#include <vector>

#include "subfid/spaces.hpp"

namespace subfid {

// CPTP map in Kraus form on the full space. make_kraus_channel checks the
// completeness relation sum E_i†E_i = I within 1e-9.
struct KrausChannel {
    SpaceDecomposition space;
    std::vector<Matrix> kraus;
};

KrausChannel make_kraus_channel(const SpaceDecomposition& space, std::vector<Matrix> kraus);

// sum_i E_i rho E_i†; the output is validated as a density operator.
DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho);

// Plumbing shared by the reduced-map checks: sum_i E_i m E_i† on raw matrices.
Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& m);

// Block data (C_i, D_i, G_i) of a channel whose Kraus operators have the form
//   [[I_A ⊗ C_i, D_i], [0, G_i]].
// Constraints carried by the blocks:
//   sum C_i†C_i = I_B,  sum (I_A ⊗ C_i)† D_i = 0,  sum (D_i†D_i + G_i†G_i) = I_K.
struct StructuredChannelSpec {
    SpaceDecomposition space;
    std::vector<Matrix> C;  // dB x dB
    std::vector<Matrix> D;  // dAB x dK
    std::vector<Matrix> G;  // dK x dK
};

// Throws naming the violated constraint; tol is the residual bound.
void validate(const StructuredChannelSpec& spec, double tol = 1e-9);

KrausChannel assemble(const StructuredChannelSpec& spec);

// Random valid spec with leak magnitude controlled by leak_strength in
// [0, 1]: the D blocks are raw Gaussian draws projected onto the null space
// of the linear constraint map, then rescaled so that the largest eigenvalue
// of sum D_i†D_i equals leak_strength²; the G blocks close the complement
// via a random Kraus set times sqrt(I_K - sum D_i†D_i).
StructuredChannelSpec random_structured(const SpaceDecomposition& space, int n,
                                        double leak_strength, RngStream& rng);

// leak_strength = 0 with D_i = 0 exactly: the initialization-free subclass.
StructuredChannelSpec random_initialization_free(const SpaceDecomposition& space, int n,
                                                 RngStream& rng);

// Block-local product channel E_A ⊗ E_B ⊕ E_K realized as the Kraus union
// {(A_j ⊗ B_k) ⊕ 0} ∪ {0 ⊕ K_l}. The two blocks evolve independently and the
// cross coherences are annihilated. complement_kraus may be empty iff dK = 0.
KrausChannel assemble_local_product(const SpaceDecomposition& space,
                                    const std::vector<Matrix>& a_kraus,
                                    const std::vector<Matrix>& b_kraus,
                                    const std::vector<Matrix>& complement_kraus);

// Channel whose action on the reduced operator of every perfectly
// initialized state is the logical CPTP map with Kraus set `logical` (F_j):
// Kraus operators [[F_j ⊗ C_i, D_ji], [0, G_ji]], blocks keyed j*nC + i.
struct ComputationChannelSpec {
    SpaceDecomposition space;
    std::vector<Matrix> logical;  // dA x dA, the map applied to the encoded state
    std::vector<Matrix> C;        // dB x dB
    std::vector<Matrix> D;        // dAB x dK, logical.size()*C.size() entries
    std::vector<Matrix> G;        // dK x dK, same count
};

void validate(const ComputationChannelSpec& spec, double tol = 1e-9);

KrausChannel assemble_computation(const ComputationChannelSpec& spec);

// Random computation channel. The D blocks are projected onto the null space
// of sum_i (I_A ⊗ C_i)† D_ji = 0 separately for every j, which also kills the
// coherence cross terms in the reduced-operator update, so
//   reduced' = logical(reduced) + Tr_B{sum D rho3 D†}
// holds for arbitrary (not just block-diagonal) input states.
ComputationChannelSpec random_computation(const SpaceDecomposition& space, int n_logical,
                                          int n_gauge, double leak_strength, RngStream& rng);

// Tr_B{sum_i D_i rho3 D_i†}: the positive operator added to the reduced
// operator when a structured channel acts on an imperfectly initialized
// state.
PositiveOperator leak_term(const StructuredChannelSpec& spec, const DensityOperator& rho);
PositiveOperator leak_term(const ComputationChannelSpec& spec, const DensityOperator& rho);

// Raw-matrix version used by the harness so that violations can be recorded
// instead of thrown.
Matrix leak_term_matrix(const SpaceDecomposition& space, const std::vector<Matrix>& d_blocks,
                        const Matrix& rho3);

// Decision procedure for the noiseless block form: every Kraus operator must
// have a vanishing lower-left block and an upper-left block equal to
// I_A ⊗ C_i. On failure the witness names the offending Kraus index and block.
struct NoiselessWitness {
    bool noiseless = true;
    int kraus_index = -1;
    std::string detail;
};

NoiselessWitness is_noiseless(const KrausChannel& channel, double tol = 1e-9);

// Unitary exchanging the two tensor factors (requires dA = dB), identity on
// the complement.
Matrix swap_ab_unitary(const SpaceDecomposition& space);

}  // namespace subfid
