#include "subfid/spaces.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace subfid {

namespace {

void check_dims(const SpaceDecomposition& space, const Matrix& m, const char* who) {
    if (m.rows() != space.dS() || m.cols() != space.dS())
        throw std::invalid_argument(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", expected " + std::to_string(space.dS()) +
                                    "x" + std::to_string(space.dS()) + " for dims (" +
                                    std::to_string(space.dA) + "," + std::to_string(space.dB) + "," +
                                    std::to_string(space.dK) + ")");
}

void check_square_density(const Matrix& m, const char* who, int dim) {
    if (m.rows() != dim || m.cols() != dim)
        throw std::invalid_argument(std::string(who) + ": factor state is " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()) + ", expected " + std::to_string(dim) +
                                    "x" + std::to_string(dim));
}

}  // namespace

BlockView block_view(const SpaceDecomposition& space, const Matrix& m) {
    check_dims(space, m, "block_view");
    const int n = space.dAB();
    BlockView v;
    v.rho1 = m.topLeftCorner(n, n);
    v.rho2 = m.topRightCorner(n, space.dK);
    v.rho3 = m.bottomRightCorner(space.dK, space.dK);
    return v;
}

Matrix assemble_blocks(const SpaceDecomposition& space, const Matrix& rho1, const Matrix& rho2,
                       const Matrix& rho3) {
    const int n = space.dAB();
    if (rho1.rows() != n || rho1.cols() != n || rho2.rows() != n || rho2.cols() != space.dK ||
        rho3.rows() != space.dK || rho3.cols() != space.dK)
        throw std::invalid_argument("assemble_blocks: block shapes do not match the decomposition");
    Matrix m(space.dS(), space.dS());
    m.topLeftCorner(n, n) = rho1;
    m.topRightCorner(n, space.dK) = rho2;
    m.bottomLeftCorner(space.dK, n) = rho2.adjoint();
    m.bottomRightCorner(space.dK, space.dK) = rho3;
    return m;
}

DensityOperator::DensityOperator(SpaceDecomposition space, Matrix m)
    : space_(space), m_(std::move(m)) {
    check_dims(space_, m_, "DensityOperator");
    const double herm = hermiticity_error(m_);
    if (herm > 1e-9)
        throw std::invalid_argument("DensityOperator: not Hermitian (deviation " + std::to_string(herm) + ")");
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw std::invalid_argument("DensityOperator: trace is not 1 (trace " + std::to_string(tr) + ")");
    const double min_eig = min_eigenvalue(m_);
    if (min_eig < -kPsdClip)
        throw std::invalid_argument("DensityOperator: not positive semidefinite (min eigenvalue " +
                                    std::to_string(min_eig) + ")");
}

PositiveOperator::PositiveOperator(SpaceDecomposition space, Matrix m)
    : space_(space), m_(std::move(m)) {
    if (m_.rows() != m_.cols())
        throw std::invalid_argument("PositiveOperator: matrix must be square");
    if (m_.rows() != space_.dS() && m_.rows() != space_.dA)
        throw std::invalid_argument("PositiveOperator: matrix dimension " + std::to_string(m_.rows()) +
                                    " matches neither the full space nor the protected factor");
    const double herm = hermiticity_error(m_);
    if (herm > 1e-9)
        throw std::invalid_argument("PositiveOperator: not Hermitian (deviation " + std::to_string(herm) + ")");
    const double min_eig = min_eigenvalue(m_);
    if (min_eig < -kPsdClip)
        throw std::invalid_argument("PositiveOperator: not positive semidefinite (min eigenvalue " +
                                    std::to_string(min_eig) + ")");
    trace_weight_ = m_.trace().real();
}

double weight_ab(const DensityOperator& rho) {
    const int n = rho.space().dAB();
    return rho.matrix().topLeftCorner(n, n).trace().real();
}

double weight_k(const DensityOperator& rho) {
    const int k = rho.space().dK;
    return rho.matrix().bottomRightCorner(k, k).trace().real();
}

PositiveOperator project_ab(const DensityOperator& rho) {
    const auto& space = rho.space();
    const int n = space.dAB();
    Matrix out = Matrix::Zero(space.dS(), space.dS());
    out.topLeftCorner(n, n) = rho.matrix().topLeftCorner(n, n);
    return {space, std::move(out)};
}

PositiveOperator project_k(const DensityOperator& rho) {
    const auto& space = rho.space();
    const int k = space.dK;
    Matrix out = Matrix::Zero(space.dS(), space.dS());
    if (k > 0) out.bottomRightCorner(k, k) = rho.matrix().bottomRightCorner(k, k);
    return {space, std::move(out)};
}

DensityOperator project_blocks(const DensityOperator& rho) {
    const auto& space = rho.space();
    const int n = space.dAB();
    Matrix out = rho.matrix();
    out.topRightCorner(n, space.dK).setZero();
    out.bottomLeftCorner(space.dK, n).setZero();
    return {space, std::move(out)};
}

PositiveOperator reduced_on_a(const DensityOperator& rho) {
    const auto& space = rho.space();
    const int n = space.dAB();
    Matrix reduced = partial_trace_b(rho.matrix().topLeftCorner(n, n), space.dA, space.dB);
    return {space, hermitize(reduced)};
}

Matrix normalized_reduced_on_a(const DensityOperator& rho) {
    PositiveOperator reduced = reduced_on_a(rho);
    if (reduced.trace_weight() <= kZeroWeightTol)
        throw std::domain_error("normalized_reduced_on_a: no support on code subspace");
    return reduced.matrix() / reduced.trace_weight();
}

DensityOperator make_perfect_state(const SpaceDecomposition& space, const Matrix& rho_a,
                                   const Matrix& sigma_b) {
    check_square_density(rho_a, "make_perfect_state", space.dA);
    check_square_density(sigma_b, "make_perfect_state", space.dB);
    Matrix m = Matrix::Zero(space.dS(), space.dS());
    m.topLeftCorner(space.dAB(), space.dAB()) = kron(rho_a, sigma_b);
    return {space, std::move(m)};
}

DensityOperator make_imperfect_state(const SpaceDecomposition& space, const Matrix& rho_a,
                                     const Matrix& sigma_b, double leak, const Matrix& kappa,
                                     double coherence, RngStream& rng) {
    check_square_density(rho_a, "make_imperfect_state", space.dA);
    check_square_density(sigma_b, "make_imperfect_state", space.dB);
    if (leak < 0.0 || leak > 1.0)
        throw std::invalid_argument("make_imperfect_state: leak must be in [0, 1]");
    if (coherence < 0.0 || coherence > 1.0)
        throw std::invalid_argument("make_imperfect_state: coherence must be in [0, 1]");
    if (leak > 0.0 && space.dK < 1)
        throw std::invalid_argument("make_imperfect_state: leak > 0 requires dK >= 1");
    const int n = space.dAB();
    const int k = space.dK;

    Matrix rho1 = (1.0 - leak) * kron(rho_a, sigma_b);
    Matrix rho3 = Matrix::Zero(k, k);
    if (k > 0 && leak > 0.0) {
        check_square_density(kappa, "make_imperfect_state", k);
        rho3 = leak * kappa;
    }
    Matrix rho2 = Matrix::Zero(n, k);
    if (coherence > 0.0 && leak > 0.0 && leak < 1.0) {
        // A block [[P, X], [X†, Q]] is PSD exactly when X = sqrt(P) W sqrt(Q)
        // for a contraction W; a sub-block of a Haar unitary has norm <= 1,
        // and the leading isometry slice has norm exactly 1.
        Matrix contraction;
        if (k <= n)
            contraction = haar_unitary(n, rng).leftCols(k);
        else
            contraction = haar_unitary(k, rng).topRows(n);
        rho2 = coherence * (psd_sqrt(hermitize(rho1)) * contraction * psd_sqrt(hermitize(rho3)));
    }
    Matrix m = assemble_blocks(space, rho1, rho2, rho3);
    // The construction cannot leave the PSD cone; the DensityOperator
    // invariants re-verify that.
    return {space, hermitize(m)};
}

namespace {

// Kraus union realizing (id_A ⊗ E_B) ⊕ E_K: block-local, annihilates the
// cross blocks, and preserves the reduced operator on the protected factor.
Matrix apply_block_local(const SpaceDecomposition& space, const std::vector<Matrix>& gauge_kraus,
                         const std::vector<Matrix>& complement_kraus, const Matrix& m) {
    const int n = space.dAB();
    const int k = space.dK;
    const Matrix id_a = Matrix::Identity(space.dA, space.dA);
    Matrix out = Matrix::Zero(space.dS(), space.dS());
    for (const auto& b : gauge_kraus) {
        const Matrix e = direct_sum(kron(id_a, b), Matrix::Zero(k, k));
        out += e * m * e.adjoint();
    }
    for (const auto& g : complement_kraus) {
        const Matrix e = direct_sum(Matrix::Zero(n, n), g);
        out += e * m * e.adjoint();
    }
    return out;
}

}  // namespace

DensityOperator random_state_same_reduced(const DensityOperator& rho, RngStream& rng, int steps) {
    if (steps < 0) throw std::invalid_argument("random_state_same_reduced: steps must be >= 0");
    const auto& space = rho.space();
    const int k = space.dK;
    std::vector<Matrix> pool{rho.matrix()};
    Matrix cur = rho.matrix();
    for (int s = 0; s < steps; ++s) {
        switch (rng.uniform_index(3)) {
            case 0: {  // block-local unitary I_A ⊗ U_B ⊕ U_K
                const Matrix u = direct_sum(
                    kron(Matrix::Identity(space.dA, space.dA), haar_unitary(space.dB, rng)),
                    k > 0 ? haar_unitary(k, rng) : Matrix(0, 0));
                cur = u * cur * u.adjoint();
                break;
            }
            case 1: {  // block-local channel (id_A ⊗ E_B) ⊕ E_K
                const auto gauge = random_kraus_set(space.dB, 2, rng);
                const auto complement =
                    k > 0 ? random_kraus_set(k, 2, rng) : std::vector<Matrix>{};
                cur = apply_block_local(space, gauge, complement, cur);
                break;
            }
            default: {  // convex mixture with an earlier member
                const Matrix& other = pool[rng.uniform_index(pool.size())];
                const double lambda = rng.uniform();
                cur = lambda * cur + (1.0 - lambda) * other;
                break;
            }
        }
        cur = hermitize(cur);
        pool.push_back(cur);
    }
    return {space, std::move(cur)};
}

DensityOperator random_perfect_state(const SpaceDecomposition& space, RngStream& rng) {
    const Matrix rho_a = random_density(space.dA, 1 + static_cast<int>(rng.uniform_index(space.dA)), rng);
    const Matrix sigma_b = random_density(space.dB, 1 + static_cast<int>(rng.uniform_index(space.dB)), rng);
    return make_perfect_state(space, rho_a, sigma_b);
}

DensityOperator random_imperfect_state(const SpaceDecomposition& space, double leak,
                                       double coherence, RngStream& rng) {
    const Matrix rho_a = random_density(space.dA, 1 + static_cast<int>(rng.uniform_index(space.dA)), rng);
    const Matrix sigma_b = random_density(space.dB, 1 + static_cast<int>(rng.uniform_index(space.dB)), rng);
    Matrix kappa(0, 0);
    if (space.dK > 0)
        kappa = random_density(space.dK, 1 + static_cast<int>(rng.uniform_index(space.dK)), rng);
    return make_imperfect_state(space, rho_a, sigma_b, leak, kappa, coherence, rng);
}

DensityOperator random_imperfect_state(const SpaceDecomposition& space, RngStream& rng) {
    const double leak = space.dK > 0 ? rng.uniform() : 0.0;
    const double coherence = rng.uniform();
    return random_imperfect_state(space, leak, coherence, rng);
}

DensityOperator random_full_state(const SpaceDecomposition& space, RngStream& rng) {
    const int d = space.dS();
    return {space, random_density(d, 1 + static_cast<int>(rng.uniform_index(d)), rng)};
}

}  // namespace subfid
