#include "subfid/channels.hpp"

#include <cmath>

namespace subfid {

namespace {

void check_kraus_shapes(const std::vector<Matrix>& kraus, int dim, const char* who) {
    if (kraus.empty()) throw std::invalid_argument(std::string(who) + ": empty Kraus set");
    for (const auto& e : kraus)
        if (e.rows() != dim || e.cols() != dim)
            throw std::invalid_argument(std::string(who) + ": Kraus operator is " +
                                        std::to_string(e.rows()) + "x" + std::to_string(e.cols()) +
                                        ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
}

double completeness_residual(const std::vector<Matrix>& kraus, int dim) {
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& e : kraus) sum += e.adjoint() * e;
    return (sum - Matrix::Identity(dim, dim)).norm();
}

}  // namespace

KrausChannel make_kraus_channel(const SpaceDecomposition& space, std::vector<Matrix> kraus) {
    check_kraus_shapes(kraus, space.dS(), "make_kraus_channel");
    const double residual = completeness_residual(kraus, space.dS());
    if (residual > 1e-9)
        throw std::invalid_argument("make_kraus_channel: completeness violated, ||sum E†E - I|| = " +
                                    std::to_string(residual));
    return {space, std::move(kraus)};
}

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& m) {
    if (kraus.empty()) throw std::invalid_argument("apply_kraus: empty Kraus set");
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (const auto& e : kraus) out += e * m * e.adjoint();
    return out;
}

DensityOperator apply(const KrausChannel& channel, const DensityOperator& rho) {
    if (!(channel.space == rho.space()))
        throw std::invalid_argument("apply: channel and state decompositions differ");
    return {channel.space, hermitize(apply_kraus(channel.kraus, rho.matrix()))};
}

void validate(const StructuredChannelSpec& spec, double tol) {
    const auto& space = spec.space;
    const std::size_t n = spec.C.size();
    if (n == 0 || spec.D.size() != n || spec.G.size() != n)
        throw std::invalid_argument("StructuredChannelSpec: C, D, G must have equal nonzero lengths");
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.C[i].rows() != space.dB || spec.C[i].cols() != space.dB)
            throw std::invalid_argument("StructuredChannelSpec: C block has wrong shape");
        if (spec.D[i].rows() != space.dAB() || spec.D[i].cols() != space.dK)
            throw std::invalid_argument("StructuredChannelSpec: D block has wrong shape");
        if (spec.G[i].rows() != space.dK || spec.G[i].cols() != space.dK)
            throw std::invalid_argument("StructuredChannelSpec: G block has wrong shape");
    }
    const Matrix id_a = Matrix::Identity(space.dA, space.dA);
    Matrix gauge_sum = Matrix::Zero(space.dB, space.dB);
    Matrix cross_sum = Matrix::Zero(space.dAB(), space.dK);
    Matrix complement_sum = Matrix::Zero(space.dK, space.dK);
    for (std::size_t i = 0; i < n; ++i) {
        gauge_sum += spec.C[i].adjoint() * spec.C[i];
        cross_sum += kron(id_a, spec.C[i]).adjoint() * spec.D[i];
        complement_sum += spec.D[i].adjoint() * spec.D[i] + spec.G[i].adjoint() * spec.G[i];
    }
    const double r_gauge = (gauge_sum - Matrix::Identity(space.dB, space.dB)).norm();
    if (r_gauge > tol)
        throw std::invalid_argument("StructuredChannelSpec: sum C†C != I_B (residual " +
                                    std::to_string(r_gauge) + ")");
    const double r_cross = cross_sum.norm();
    if (r_cross > tol)
        throw std::invalid_argument("StructuredChannelSpec: sum (I⊗C)†D != 0 (residual " +
                                    std::to_string(r_cross) + ")");
    const double r_complement = (complement_sum - Matrix::Identity(space.dK, space.dK)).norm();
    if (r_complement > tol)
        throw std::invalid_argument("StructuredChannelSpec: sum (D†D + G†G) != I_K (residual " +
                                    std::to_string(r_complement) + ")");
}

KrausChannel assemble(const StructuredChannelSpec& spec) {
    validate(spec);
    const auto& space = spec.space;
    const Matrix id_a = Matrix::Identity(space.dA, space.dA);
    std::vector<Matrix> kraus;
    kraus.reserve(spec.C.size());
    for (std::size_t i = 0; i < spec.C.size(); ++i) {
        Matrix e = Matrix::Zero(space.dS(), space.dS());
        e.topLeftCorner(space.dAB(), space.dAB()) = kron(id_a, spec.C[i]);
        e.topRightCorner(space.dAB(), space.dK) = spec.D[i];
        e.bottomRightCorner(space.dK, space.dK) = spec.G[i];
        kraus.push_back(std::move(e));
    }
    return make_kraus_channel(space, std::move(kraus));
}

namespace {

// Draw D blocks in the null space of the map {D_i} -> sum_i (I⊗C_i)†D_i and
// rescale so that max eig of sum D†D = leak_strength². The stacked blocks
// (I⊗C_i) form an isometry column, so the projector is I - AA†.
std::vector<Matrix> random_leak_blocks(const SpaceDecomposition& space,
                                       const std::vector<Matrix>& gauge_blocks,
                                       double leak_strength, RngStream& rng) {
    const int n = static_cast<int>(gauge_blocks.size());
    const int nab = space.dAB();
    const int k = space.dK;
    std::vector<Matrix> d_blocks(n, Matrix::Zero(nab, k));
    if (k == 0 || leak_strength <= 0.0 || n < 2) return d_blocks;

    const Matrix id_a = Matrix::Identity(space.dA, space.dA);
    Matrix stacked(static_cast<Eigen::Index>(n) * nab, nab);
    for (int i = 0; i < n; ++i)
        stacked.middleRows(static_cast<Eigen::Index>(i) * nab, nab) = kron(id_a, gauge_blocks[i]);

    const Matrix raw = ginibre(n * nab, k, rng);
    const Matrix projected = raw - stacked * (stacked.adjoint() * raw);
    const Matrix gram = hermitize(projected.adjoint() * projected);  // = sum D̂†D̂
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    const double top = solver.eigenvalues().maxCoeff();
    if (top <= 1e-24) return d_blocks;
    const double scale = leak_strength / std::sqrt(top);
    for (int i = 0; i < n; ++i)
        d_blocks[i] = scale * projected.middleRows(static_cast<Eigen::Index>(i) * nab, nab);
    return d_blocks;
}

// G blocks closing sum (D†D + G†G) = I_K: a random Kraus set on K times
// sqrt(I_K - sum D†D).
std::vector<Matrix> closing_blocks(const SpaceDecomposition& space,
                                   const std::vector<Matrix>& d_blocks, int count,
                                   RngStream& rng) {
    const int k = space.dK;
    if (k == 0) return std::vector<Matrix>(count, Matrix(0, 0));
    Matrix used = Matrix::Zero(k, k);
    for (const auto& d : d_blocks) used += d.adjoint() * d;
    const Matrix tail = psd_sqrt(hermitize(Matrix::Identity(k, k) - used));
    const auto closing = random_kraus_set(k, count, rng);
    std::vector<Matrix> g_blocks(count);
    for (int i = 0; i < count; ++i) g_blocks[i] = closing[i] * tail;
    return g_blocks;
}

}  // namespace

StructuredChannelSpec random_structured(const SpaceDecomposition& space, int n,
                                        double leak_strength, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("random_structured: n must be >= 1");
    if (leak_strength < 0.0 || leak_strength > 1.0)
        throw std::invalid_argument("random_structured: leak_strength must be in [0, 1]");
    StructuredChannelSpec spec{space, random_kraus_set(space.dB, n, rng), {}, {}};
    spec.D = random_leak_blocks(space, spec.C, leak_strength, rng);
    spec.G = closing_blocks(space, spec.D, n, rng);
    return spec;
}

StructuredChannelSpec random_initialization_free(const SpaceDecomposition& space, int n,
                                                 RngStream& rng) {
    return random_structured(space, n, 0.0, rng);
}

KrausChannel assemble_local_product(const SpaceDecomposition& space,
                                    const std::vector<Matrix>& a_kraus,
                                    const std::vector<Matrix>& b_kraus,
                                    const std::vector<Matrix>& complement_kraus) {
    check_kraus_shapes(a_kraus, space.dA, "assemble_local_product (A factor)");
    check_kraus_shapes(b_kraus, space.dB, "assemble_local_product (B factor)");
    if (space.dK > 0)
        check_kraus_shapes(complement_kraus, space.dK, "assemble_local_product (K factor)");
    const double ra = completeness_residual(a_kraus, space.dA);
    if (ra > 1e-9)
        throw std::invalid_argument("assemble_local_product: A factor completeness failure (residual " +
                                    std::to_string(ra) + ")");
    const double rb = completeness_residual(b_kraus, space.dB);
    if (rb > 1e-9)
        throw std::invalid_argument("assemble_local_product: B factor completeness failure (residual " +
                                    std::to_string(rb) + ")");
    if (space.dK > 0) {
        const double rk = completeness_residual(complement_kraus, space.dK);
        if (rk > 1e-9)
            throw std::invalid_argument("assemble_local_product: K factor completeness failure (residual " +
                                        std::to_string(rk) + ")");
    }
    const int nab = space.dAB();
    const int k = space.dK;
    std::vector<Matrix> kraus;
    for (const auto& a : a_kraus)
        for (const auto& b : b_kraus)
            kraus.push_back(direct_sum(kron(a, b), Matrix::Zero(k, k)));
    if (k > 0)
        for (const auto& g : complement_kraus)
            kraus.push_back(direct_sum(Matrix::Zero(nab, nab), g));
    return make_kraus_channel(space, std::move(kraus));
}

void validate(const ComputationChannelSpec& spec, double tol) {
    const auto& space = spec.space;
    const std::size_t nf = spec.logical.size();
    const std::size_t nc = spec.C.size();
    if (nf == 0 || nc == 0)
        throw std::invalid_argument("ComputationChannelSpec: logical and C must be nonempty");
    if (spec.D.size() != nf * nc || spec.G.size() != nf * nc)
        throw std::invalid_argument("ComputationChannelSpec: D, G must have logical.size()*C.size() entries");
    for (const auto& f : spec.logical)
        if (f.rows() != space.dA || f.cols() != space.dA)
            throw std::invalid_argument("ComputationChannelSpec: logical block has wrong shape");
    for (const auto& c : spec.C)
        if (c.rows() != space.dB || c.cols() != space.dB)
            throw std::invalid_argument("ComputationChannelSpec: C block has wrong shape");
    for (const auto& d : spec.D)
        if (d.rows() != space.dAB() || d.cols() != space.dK)
            throw std::invalid_argument("ComputationChannelSpec: D block has wrong shape");
    for (const auto& g : spec.G)
        if (g.rows() != space.dK || g.cols() != space.dK)
            throw std::invalid_argument("ComputationChannelSpec: G block has wrong shape");

    const double r_logical = completeness_residual(spec.logical, space.dA);
    if (r_logical > tol)
        throw std::invalid_argument("ComputationChannelSpec: sum F†F != I_A (residual " +
                                    std::to_string(r_logical) + ")");
    const double r_gauge = completeness_residual(spec.C, space.dB);
    if (r_gauge > tol)
        throw std::invalid_argument("ComputationChannelSpec: sum C†C != I_B (residual " +
                                    std::to_string(r_gauge) + ")");
    Matrix cross_sum = Matrix::Zero(space.dAB(), space.dK);
    Matrix complement_sum = Matrix::Zero(space.dK, space.dK);
    for (std::size_t j = 0; j < nf; ++j)
        for (std::size_t i = 0; i < nc; ++i) {
            const auto& d = spec.D[j * nc + i];
            const auto& g = spec.G[j * nc + i];
            cross_sum += kron(spec.logical[j], spec.C[i]).adjoint() * d;
            complement_sum += d.adjoint() * d + g.adjoint() * g;
        }
    const double r_cross = cross_sum.norm();
    if (r_cross > tol)
        throw std::invalid_argument("ComputationChannelSpec: sum (F⊗C)†D != 0 (residual " +
                                    std::to_string(r_cross) + ")");
    const double r_complement = (complement_sum - Matrix::Identity(space.dK, space.dK)).norm();
    if (r_complement > tol)
        throw std::invalid_argument("ComputationChannelSpec: sum (D†D + G†G) != I_K (residual " +
                                    std::to_string(r_complement) + ")");
}

KrausChannel assemble_computation(const ComputationChannelSpec& spec) {
    validate(spec);
    const auto& space = spec.space;
    std::vector<Matrix> kraus;
    const std::size_t nc = spec.C.size();
    for (std::size_t j = 0; j < spec.logical.size(); ++j)
        for (std::size_t i = 0; i < nc; ++i) {
            Matrix e = Matrix::Zero(space.dS(), space.dS());
            e.topLeftCorner(space.dAB(), space.dAB()) = kron(spec.logical[j], spec.C[i]);
            e.topRightCorner(space.dAB(), space.dK) = spec.D[j * nc + i];
            e.bottomRightCorner(space.dK, space.dK) = spec.G[j * nc + i];
            kraus.push_back(std::move(e));
        }
    return make_kraus_channel(space, std::move(kraus));
}

ComputationChannelSpec random_computation(const SpaceDecomposition& space, int n_logical,
                                          int n_gauge, double leak_strength, RngStream& rng) {
    if (n_logical < 1 || n_gauge < 1)
        throw std::invalid_argument("random_computation: Kraus counts must be >= 1");
    if (leak_strength < 0.0 || leak_strength > 1.0)
        throw std::invalid_argument("random_computation: leak_strength must be in [0, 1]");
    ComputationChannelSpec spec{space,
                                random_kraus_set(space.dA, n_logical, rng),
                                random_kraus_set(space.dB, n_gauge, rng),
                                {},
                                {}};
    const int k = space.dK;
    const int nab = space.dAB();
    spec.D.assign(static_cast<std::size_t>(n_logical) * n_gauge, Matrix::Zero(nab, k));
    if (k > 0 && leak_strength > 0.0 && n_gauge >= 2) {
        // Per-logical-index projection; scaled jointly so that
        // max eig of sum over all (j,i) of D†D equals leak_strength².
        std::vector<Matrix> projected(spec.D.size());
        Matrix gram = Matrix::Zero(k, k);
        const Matrix id_a = Matrix::Identity(space.dA, space.dA);
        Matrix stacked(static_cast<Eigen::Index>(n_gauge) * nab, nab);
        for (int i = 0; i < n_gauge; ++i)
            stacked.middleRows(static_cast<Eigen::Index>(i) * nab, nab) = kron(id_a, spec.C[i]);
        for (int j = 0; j < n_logical; ++j) {
            const Matrix raw = ginibre(n_gauge * nab, k, rng);
            const Matrix proj = raw - stacked * (stacked.adjoint() * raw);
            for (int i = 0; i < n_gauge; ++i)
                projected[static_cast<std::size_t>(j) * n_gauge + i] =
                    proj.middleRows(static_cast<Eigen::Index>(i) * nab, nab);
            gram += hermitize(proj.adjoint() * proj);
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(gram), Eigen::EigenvaluesOnly);
        const double top = solver.eigenvalues().maxCoeff();
        if (top > 1e-24) {
            const double scale = leak_strength / std::sqrt(top);
            for (std::size_t m = 0; m < spec.D.size(); ++m) spec.D[m] = scale * projected[m];
        }
    }
    spec.G = closing_blocks(space, spec.D, n_logical * n_gauge, rng);
    return spec;
}

Matrix leak_term_matrix(const SpaceDecomposition& space, const std::vector<Matrix>& d_blocks,
                        const Matrix& rho3) {
    if (rho3.rows() != space.dK || rho3.cols() != space.dK)
        throw std::invalid_argument("leak_term_matrix: rho3 has wrong shape");
    Matrix acc = Matrix::Zero(space.dAB(), space.dAB());
    for (const auto& d : d_blocks) {
        if (d.rows() != space.dAB() || d.cols() != space.dK)
            throw std::invalid_argument("leak_term_matrix: D block has wrong shape");
        acc += d * rho3 * d.adjoint();
    }
    return hermitize(partial_trace_b(acc, space.dA, space.dB));
}

PositiveOperator leak_term(const StructuredChannelSpec& spec, const DensityOperator& rho) {
    if (!(spec.space == rho.space()))
        throw std::invalid_argument("leak_term: spec and state decompositions differ");
    const BlockView blocks = block_view(rho.space(), rho.matrix());
    return {rho.space(), leak_term_matrix(rho.space(), spec.D, blocks.rho3)};
}

PositiveOperator leak_term(const ComputationChannelSpec& spec, const DensityOperator& rho) {
    if (!(spec.space == rho.space()))
        throw std::invalid_argument("leak_term: spec and state decompositions differ");
    const BlockView blocks = block_view(rho.space(), rho.matrix());
    return {rho.space(), leak_term_matrix(rho.space(), spec.D, blocks.rho3)};
}

NoiselessWitness is_noiseless(const KrausChannel& channel, double tol) {
    const auto& space = channel.space;
    const int nab = space.dAB();
    for (std::size_t i = 0; i < channel.kraus.size(); ++i) {
        const Matrix& e = channel.kraus[i];
        const double lower = e.bottomLeftCorner(space.dK, nab).norm();
        if (lower > tol)
            return {false, static_cast<int>(i),
                    "lower-left block is non-zero (norm " + std::to_string(lower) + ")"};
        const Matrix upper = e.topLeftCorner(nab, nab);
        // Candidate gauge block: average of the diagonal dB x dB sub-blocks;
        // the upper-left block has the form I_A ⊗ C exactly when it equals
        // kron(I_A, candidate).
        Matrix candidate = Matrix::Zero(space.dB, space.dB);
        for (int a = 0; a < space.dA; ++a)
            candidate += upper.block(static_cast<Eigen::Index>(a) * space.dB,
                                     static_cast<Eigen::Index>(a) * space.dB, space.dB, space.dB);
        candidate /= static_cast<double>(space.dA);
        const double residual = (upper - kron(Matrix::Identity(space.dA, space.dA), candidate)).norm();
        if (residual > tol)
            return {false, static_cast<int>(i),
                    "upper-left block is not of the form I_A ⊗ C (residual " + std::to_string(residual) +
                        ")"};
    }
    return {};
}

Matrix swap_ab_unitary(const SpaceDecomposition& space) {
    if (space.dA != space.dB)
        throw std::invalid_argument("swap_ab_unitary: requires dA = dB");
    const int d = space.dA;
    Matrix u = Matrix::Zero(space.dS(), space.dS());
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            u(static_cast<Eigen::Index>(b) * d + a, static_cast<Eigen::Index>(a) * d + b) = 1.0;
    for (int k = 0; k < space.dK; ++k) {
        const Eigen::Index idx = space.dAB() + k;
        u(idx, idx) = 1.0;
    }
    return u;
}

}  // namespace subfid
