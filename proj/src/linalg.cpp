#include "subfid/linalg.hpp"

#include <cmath>
#include <string>

namespace subfid {

double hermiticity_error(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermiticity_error: matrix must be square");
    return (m - m.adjoint()).norm();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    if (a.size() > 0) out.topLeftCorner(a.rows(), a.cols()) = a;
    if (b.size() > 0) out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

HermitianEig hermitian_eig(const Matrix& m) {
    const Matrix h = hermitize(m);
    if (h.rows() == 0) return {RealVector(0), Matrix(0, 0)};
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("min_eigenvalue: matrix must be square");
    if (m.rows() == 0) return std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("min_eigenvalue: eigensolver did not converge");
    return solver.eigenvalues().minCoeff();
}

namespace {

// Shared precondition checks for the PSD square-root routines.
HermitianEig checked_psd_eig(const Matrix& m, double clip, const char* who) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square");
    if (m.rows() > 0 && hermiticity_error(m) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian");
    HermitianEig eig = hermitian_eig(m);
    if (m.rows() > 0 && eig.eigenvalues.minCoeff() < -clip)
        throw std::domain_error(std::string(who) + ": matrix is not positive semidefinite (min eigenvalue " +
                                std::to_string(eig.eigenvalues.minCoeff()) + ")");
    return eig;
}

}  // namespace

Matrix psd_sqrt(const Matrix& m, double clip) {
    HermitianEig eig = checked_psd_eig(m, clip, "psd_sqrt");
    const Eigen::Index n = m.rows();
    RealVector roots(n);
    for (Eigen::Index i = 0; i < n; ++i)
        roots(i) = eig.eigenvalues(i) > 0.0 ? std::sqrt(eig.eigenvalues(i)) : 0.0;
    return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

Matrix psd_factor(const Matrix& m, double support_cut) {
    HermitianEig eig = checked_psd_eig(m, kPsdClip, "psd_factor");
    const Eigen::Index n = m.rows();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (eig.eigenvalues(i) > support_cut) ++rank;
    Matrix factor(n, rank);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (eig.eigenvalues(i) > support_cut)
            factor.col(col++) = std::sqrt(eig.eigenvalues(i)) * eig.eigenvectors.col(i);
    }
    return factor;
}

Matrix partial_trace_b(const Matrix& m, int dim_a, int dim_b) {
    if (dim_a < 1 || dim_b < 1)
        throw std::invalid_argument("partial_trace_b: dims must be >= 1");
    const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
    if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument("partial_trace_b: matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", expected " + std::to_string(n) + "x" +
                                    std::to_string(n));
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
        for (int k = 0; k < dim_a; ++k) {
            cd sum(0.0, 0.0);
            for (int b = 0; b < dim_b; ++b)
                sum += m(static_cast<Eigen::Index>(i) * dim_b + b,
                         static_cast<Eigen::Index>(k) * dim_b + b);
            out(i, k) = sum;
        }
    return out;
}

Matrix ginibre(int rows, int cols, RngStream& rng) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("ginibre: negative dimension");
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.normal_complex();
    return g;
}

Matrix haar_unitary(int dim, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be >= 1");
    const Matrix g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Vector r_diag = qr.matrixQR().diagonal();
    for (int i = 0; i < dim; ++i) {
        const double mag = std::abs(r_diag(i));
        q.col(i) *= mag > 0.0 ? r_diag(i) / mag : cd(1.0, 0.0);
    }
    return q;
}

Matrix random_density(int dim, int rank, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("random_density: dim must be >= 1");
    if (rank < 1 || rank > dim)
        throw std::invalid_argument("random_density: rank must be in [1, dim], got " + std::to_string(rank));
    const Matrix g = ginibre(dim, rank, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    return hermitize(m);
}

std::vector<Matrix> random_kraus_set(int dim, int n, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("random_kraus_set: dim must be >= 1");
    if (n < 1) throw std::invalid_argument("random_kraus_set: n must be >= 1");
    // First dim columns of a Haar unitary on n*dim dims form an isometry V
    // with V†V = I, so the stacked blocks satisfy sum E_i†E_i = I.
    const Matrix isometry = haar_unitary(n * dim, rng).leftCols(dim);
    std::vector<Matrix> kraus(n);
    for (int i = 0; i < n; ++i) kraus[i] = isometry.middleRows(static_cast<Eigen::Index>(i) * dim, dim);
    return kraus;
}

std::vector<Matrix> random_povm(int dim, int outcomes, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("random_povm: dim must be >= 1");
    if (outcomes < 1) throw std::invalid_argument("random_povm: outcomes must be >= 1");
    std::vector<Matrix> elems(outcomes);
    Matrix total = Matrix::Zero(dim, dim);
    for (int i = 0; i < outcomes; ++i) {
        const Matrix g = ginibre(dim, dim, rng);
        elems[i] = g * g.adjoint();
        total += elems[i];
    }
    // total is PD almost surely; whiten so the elements sum to the identity.
    HermitianEig eig = hermitian_eig(total);
    RealVector inv_roots(dim);
    for (int i = 0; i < dim; ++i) inv_roots(i) = 1.0 / std::sqrt(eig.eigenvalues(i));
    const Matrix whiten = eig.eigenvectors * inv_roots.asDiagonal() * eig.eigenvectors.adjoint();
    for (auto& e : elems) e = hermitize(whiten * e * whiten);
    return elems;
}

}  // namespace subfid
