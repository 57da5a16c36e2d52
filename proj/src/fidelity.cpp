#include "subfid/fidelity.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace subfid {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* who) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument(std::string(who) + ": operators must be square and of equal dimension");
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

// Tr sqrt(sqrt(p) q sqrt(p)) = sum of singular values of L_p† L_q for any
// factorizations p = L_p L_p†, q = L_q L_q†. Working with rank-revealing
// factors keeps square roots of rounding noise out of the sum.
double nuclear_fidelity(const Matrix& p, const Matrix& q, const char* who) {
    check_same_shape(p, q, who);
    const Matrix fp = psd_factor(p);
    // Identical operands have fidelity Tr(p) exactly.
    if (bitwise_equal(p, q)) return std::max(0.0, p.trace().real());
    const Matrix fq = psd_factor(q);
    if (fp.cols() == 0 || fq.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(fp.adjoint() * fq);
    return svd.singularValues().sum();
}

}  // namespace

double uhlmann_fidelity(const Matrix& tau, const Matrix& upsilon) {
    return std::clamp(nuclear_fidelity(tau, upsilon, "uhlmann_fidelity"), 0.0, 1.0);
}

double uhlmann_fidelity(const DensityOperator& tau, const DensityOperator& upsilon) {
    if (!(tau.space() == upsilon.space()))
        throw std::invalid_argument("uhlmann_fidelity: decompositions differ");
    return uhlmann_fidelity(tau.matrix(), upsilon.matrix());
}

double fcheck(const Matrix& p, const Matrix& q) { return nuclear_fidelity(p, q, "fcheck"); }

double fcheck(const PositiveOperator& p, const PositiveOperator& q) {
    return fcheck(p.matrix(), q.matrix());
}

double angle(const DensityOperator& tau, const DensityOperator& upsilon) {
    return std::acos(std::clamp(uhlmann_fidelity(tau, upsilon), 0.0, 1.0));
}

SubsystemFidelity subsystem_fidelity_parts(const DensityOperator& tau, const DensityOperator& upsilon) {
    if (!(tau.space() == upsilon.space()))
        throw std::invalid_argument("subsystem_fidelity: decompositions differ");
    const double wt = weight_ab(tau);
    const double wu = weight_ab(upsilon);
    const double kt = weight_k(tau);
    const double ku = weight_k(upsilon);
    // A state compared with itself scores exactly 1; this keeps the angle of
    // identical inputs at exactly zero.
    if (bitwise_equal(tau.matrix(), upsilon.matrix())) return {1.0, wt, kt};
    SubsystemFidelity out;
    if (wt > kZeroWeightTol && wu > kZeroWeightTol) {
        const Matrix ta = normalized_reduced_on_a(tau);
        const Matrix ua = normalized_reduced_on_a(upsilon);
        out.ab_term = std::sqrt(wt * wu) * uhlmann_fidelity(ta, ua);
    }
    if (kt > kZeroWeightTol && ku > kZeroWeightTol) out.k_term = std::sqrt(kt * ku);
    out.total = std::clamp(out.ab_term + out.k_term, 0.0, 1.0);
    return out;
}

double subsystem_fidelity(const DensityOperator& tau, const DensityOperator& upsilon) {
    return subsystem_fidelity_parts(tau, upsilon).total;
}

double subsystem_angle(const DensityOperator& tau, const DensityOperator& upsilon) {
    return std::acos(std::clamp(subsystem_fidelity(tau, upsilon), 0.0, 1.0));
}

namespace {

DensityOperator canonical_state(const SpaceDecomposition& space, const DensityOperator& rho) {
    Matrix m = Matrix::Zero(space.dS(), space.dS());
    Matrix reference_b = Matrix::Zero(space.dB, space.dB);
    reference_b(0, 0) = 1.0;
    m.topLeftCorner(space.dAB(), space.dAB()) = kron(reduced_on_a(rho).matrix(), reference_b);
    if (space.dK > 0) m(space.dAB(), space.dAB()) = weight_k(rho);
    return {space, hermitize(m)};
}

}  // namespace

std::pair<DensityOperator, DensityOperator> canonical_maximizers(const DensityOperator& tau,
                                                                 const DensityOperator& upsilon) {
    if (!(tau.space() == upsilon.space()))
        throw std::invalid_argument("canonical_maximizers: decompositions differ");
    return {canonical_state(tau.space(), tau), canonical_state(upsilon.space(), upsilon)};
}

double definition_oracle_bound(const DensityOperator& tau, const DensityOperator& upsilon,
                               int samples, const RngStream& rng, bool include_canonical) {
    if (samples < 0) throw std::invalid_argument("definition_oracle_bound: samples must be >= 0");
    double best = 0.0;
    if (include_canonical) {
        const auto [ts, us] = canonical_maximizers(tau, upsilon);
        best = uhlmann_fidelity(ts, us);
    }
    for (int s = 0; s < samples; ++s) {
        RngStream lane = rng.split(static_cast<std::uint64_t>(s));
        // Sample 0 is the inputs themselves, a feasible pair by definition.
        const int steps = s == 0 ? 0 : 1 + static_cast<int>(lane.uniform_index(5));
        const DensityOperator ts = random_state_same_reduced(tau, lane, steps);
        const DensityOperator us = random_state_same_reduced(upsilon, lane, steps);
        best = std::max(best, uhlmann_fidelity(ts, us));
    }
    return best;
}

SubsystemPovm make_subsystem_povm(const SpaceDecomposition& space, std::vector<Matrix> elements_on_a,
                                  bool include_k_outcome) {
    SubsystemPovm povm{space, std::move(elements_on_a), include_k_outcome};
    if (povm.elements_on_a.empty())
        throw std::invalid_argument("make_subsystem_povm: no elements");
    Matrix sum = Matrix::Zero(space.dA, space.dA);
    for (const auto& e : povm.elements_on_a) {
        if (e.rows() != space.dA || e.cols() != space.dA)
            throw std::invalid_argument("make_subsystem_povm: element has wrong shape");
        if (min_eigenvalue(e) < -kPsdClip)
            throw std::invalid_argument("make_subsystem_povm: element is not positive semidefinite");
        sum += e;
    }
    const double residual = (sum - Matrix::Identity(space.dA, space.dA)).norm();
    if (residual > 1e-9)
        throw std::invalid_argument("make_subsystem_povm: elements do not sum to I_A (residual " +
                                    std::to_string(residual) + ")");
    return povm;
}

double povm_overlap(const SubsystemPovm& povm, const DensityOperator& tau,
                    const DensityOperator& upsilon) {
    if (!(povm.space == tau.space()) || !(tau.space() == upsilon.space()))
        throw std::invalid_argument("povm_overlap: decompositions differ");
    // Re-check the POVM invariants so hand-built instances fail loudly.
    make_subsystem_povm(povm.space, povm.elements_on_a, povm.include_k_outcome);
    const Matrix rt = reduced_on_a(tau).matrix();
    const Matrix ru = reduced_on_a(upsilon).matrix();
    double overlap = 0.0;
    for (const auto& e : povm.elements_on_a) {
        const double pt = std::max(0.0, (e * rt).trace().real());
        const double pu = std::max(0.0, (e * ru).trace().real());
        overlap += std::sqrt(pt * pu);
    }
    if (povm.include_k_outcome)
        overlap += std::sqrt(std::max(0.0, weight_k(tau)) * std::max(0.0, weight_k(upsilon)));
    return overlap;
}

namespace {

// Eigenbasis of the geometric-mean operator
//   tau^{-1/2} sqrt(sqrt(tau) ups sqrt(tau)) tau^{-1/2}
// restricted to the support of tau, as rank-one projectors; plus the kernel
// projector of tau as one extra outcome. Measuring in this basis attains the
// minimal outcome overlap, which equals the fidelity.
std::vector<Matrix> fuchs_measurement(const Matrix& tau, const Matrix& upsilon, double support_cut) {
    check_same_shape(tau, upsilon, "fuchs_measurement");
    const Eigen::Index dim = tau.rows();
    const HermitianEig eig = hermitian_eig(tau);
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (eig.eigenvalues(i) > support_cut) support.push_back(i);
    const Eigen::Index rank = static_cast<Eigen::Index>(support.size());
    if (rank == 0)
        throw std::domain_error("fuchs_measurement: first operator has empty support");

    Matrix frame(dim, rank);  // isometry onto supp(tau)
    RealVector lambda(rank);
    for (Eigen::Index c = 0; c < rank; ++c) {
        frame.col(c) = eig.eigenvectors.col(support[c]);
        lambda(c) = eig.eigenvalues(support[c]);
    }
    const RealVector roots = lambda.cwiseSqrt();
    const Matrix ups_s = frame.adjoint() * upsilon * frame;
    const Matrix mid = psd_sqrt(hermitize(roots.asDiagonal() * ups_s * roots.asDiagonal()));
    const Matrix gm = hermitize(roots.cwiseInverse().asDiagonal() * mid * roots.cwiseInverse().asDiagonal());
    const HermitianEig basis = hermitian_eig(gm);

    std::vector<Matrix> elements;
    elements.reserve(static_cast<std::size_t>(rank) + 1);
    for (Eigen::Index c = 0; c < rank; ++c) {
        const Vector v = frame * basis.eigenvectors.col(c);
        elements.push_back(v * v.adjoint());
    }
    if (rank < dim)
        elements.push_back(Matrix::Identity(dim, dim) - frame * frame.adjoint());
    return elements;
}

}  // namespace

SubsystemPovm optimal_subsystem_povm(const DensityOperator& tau, const DensityOperator& upsilon) {
    if (!(tau.space() == upsilon.space()))
        throw std::invalid_argument("optimal_subsystem_povm: decompositions differ");
    if (weight_ab(tau) <= kZeroWeightTol || weight_ab(upsilon) <= kZeroWeightTol)
        throw std::domain_error("optimal_subsystem_povm: no support on code subspace");
    const Matrix ta = normalized_reduced_on_a(tau);
    const Matrix ua = normalized_reduced_on_a(upsilon);
    return make_subsystem_povm(tau.space(), fuchs_measurement(ta, ua, kZeroWeightTol), true);
}

std::vector<Matrix> optimal_global_povm(const Matrix& tau, const Matrix& upsilon) {
    return fuchs_measurement(tau, upsilon, kZeroWeightTol);
}

double global_povm_overlap(const std::vector<Matrix>& elements, const Matrix& tau,
                           const Matrix& upsilon) {
    check_same_shape(tau, upsilon, "global_povm_overlap");
    double overlap = 0.0;
    for (const auto& e : elements) {
        const double pt = std::max(0.0, (e * tau).trace().real());
        const double pu = std::max(0.0, (e * upsilon).trace().real());
        overlap += std::sqrt(pt * pu);
    }
    return overlap;
}

}  // namespace subfid
