// spaces.hpp — The decomposition H^S = H^A ⊗ H^B ⊕ K, block views of states,
// reduced operators on the protected factor, and state generators.

#pragma once

#include <utility>

#include "subfid/linalg.hpp"

namespace subfid {

// Below this weight the normalized reduced operator is undefined; callers
// must branch instead of dividing.
inline constexpr double kZeroWeightTol = 1e-12;

// Dimensions of the protected factor A, the gauge factor B, and the
// complement subspace K. Basis convention: indices 0 .. dA*dB-1 span
// H^A ⊗ H^B with index a*dB + b; indices dA*dB .. dS-1 span K. The fixed
// reference vectors |0_B> and |0_K> are the first basis vectors of their
// respective spaces.
struct SpaceDecomposition {
    int dA = 1;
    int dB = 1;
    int dK = 0;

    SpaceDecomposition(int a, int b, int k) : dA(a), dB(b), dK(k) {
        if (a < 1 || b < 1 || k < 0)
            throw std::invalid_argument("SpaceDecomposition: need dA >= 1, dB >= 1, dK >= 0");
    }

    int dAB() const { return dA * dB; }
    int dS() const { return dA * dB + dK; }

    friend bool operator==(const SpaceDecomposition&, const SpaceDecomposition&) = default;
};

// The three blocks of an operator in the decomposition's basis:
//   [[rho1, rho2], [rho2†, rho3]]
// with rho1 on H^A ⊗ H^B, rho3 on K.
struct BlockView {
    Matrix rho1;  // dAB x dAB
    Matrix rho2;  // dAB x dK
    Matrix rho3;  // dK x dK
};

BlockView block_view(const SpaceDecomposition& space, const Matrix& m);
Matrix assemble_blocks(const SpaceDecomposition& space, const Matrix& rho1, const Matrix& rho2,
                       const Matrix& rho3);

// Density operator on H^S: Hermitian within 1e-9, eigenvalues >= -1e-10,
// unit trace within 1e-10. Construction validates and names the violated
// invariant.
class DensityOperator {
public:
    DensityOperator(SpaceDecomposition space, Matrix m);

    const SpaceDecomposition& space() const { return space_; }
    const Matrix& matrix() const { return m_; }

private:
    SpaceDecomposition space_;
    Matrix m_;
};

// Unnormalized Hermitian PSD operator tied to a decomposition; lives either
// on the full space or on the protected factor alone. trace_weight is the
// (real) trace, computed at construction.
class PositiveOperator {
public:
    PositiveOperator(SpaceDecomposition space, Matrix m);

    const SpaceDecomposition& space() const { return space_; }
    const Matrix& matrix() const { return m_; }
    double trace_weight() const { return trace_weight_; }

private:
    SpaceDecomposition space_;
    Matrix m_;
    double trace_weight_ = 0.0;
};

// ------------------------------ block weights --------------------------------

double weight_ab(const DensityOperator& rho);  // Tr rho1
double weight_k(const DensityOperator& rho);   // Tr rho3

// ------------------------------- projections ---------------------------------

// P_AB rho P_AB embedded in full dimension; trace weight Tr rho1.
PositiveOperator project_ab(const DensityOperator& rho);

// P_K rho P_K embedded in full dimension; trace weight Tr rho3.
PositiveOperator project_k(const DensityOperator& rho);

// Pinching that zeroes the off-diagonal blocks rho2. Trace preserving and
// CPTP, so the result is again a density operator.
DensityOperator project_blocks(const DensityOperator& rho);

// ---------------------------- reduced operators ------------------------------

// Tr_B{P_AB rho P_AB}: the unnormalized reduced operator on the protected
// factor (dA x dA).
PositiveOperator reduced_on_a(const DensityOperator& rho);

// reduced_on_a / weight; errors when the code-subspace weight is below
// kZeroWeightTol.
Matrix normalized_reduced_on_a(const DensityOperator& rho);

// ---------------------------- state constructors -----------------------------

// (rho_a ⊗ sigma_b) ⊕ 0_K: a state entirely supported on the code subspace.
DensityOperator make_perfect_state(const SpaceDecomposition& space, const Matrix& rho_a,
                                   const Matrix& sigma_b);

// Imperfectly initialized state: code block (1-leak)·(rho_a ⊗ sigma_b),
// complement block leak·kappa, and a cross block coherence·sqrt(rho1) W
// sqrt(rho3) with W a random norm-1 contraction, which is the largest
// coherence scale compatible with positivity. coherence = 0 gives a
// block-diagonal state; leak = 0 reproduces make_perfect_state.
DensityOperator make_imperfect_state(const SpaceDecomposition& space, const Matrix& rho_a,
                                     const Matrix& sigma_b, double leak, const Matrix& kappa,
                                     double coherence, RngStream& rng);

// A random state with the same reduced operator on the protected factor as
// rho, produced by composing feasibility-preserving moves: block-local
// unitaries I_A ⊗ U_B ⊕ U_K, block-local channels (id_A ⊗ E_B) ⊕ E_K, and
// convex mixtures of previously generated members. steps = 0 returns rho.
DensityOperator random_state_same_reduced(const DensityOperator& rho, RngStream& rng, int steps);

// ----------------------- random draws used by the suites ---------------------

DensityOperator random_perfect_state(const SpaceDecomposition& space, RngStream& rng);

// Imperfect initialization of a random target with the given leak and
// coherence; kappa and all factor states are drawn from rng.
DensityOperator random_imperfect_state(const SpaceDecomposition& space, double leak,
                                       double coherence, RngStream& rng);

// Same, with leak and coherence themselves drawn uniformly (leak forced to 0
// when dK = 0).
DensityOperator random_imperfect_state(const SpaceDecomposition& space, RngStream& rng);

// Generic random density operator on the full space, arbitrary support.
DensityOperator random_full_state(const SpaceDecomposition& space, RngStream& rng);

}  // namespace subfid
