// linalg.hpp — Dense complex matrix kernels: Hermitian eigendecomposition,
// PSD square roots, partial trace, tensor/direct-sum assembly, Haar/Ginibre
// random generators.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

#include "subfid/rng.hpp"

namespace subfid {

using cd = std::complex<double>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Matrix = DenseMatrix<cd>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Eigenvalue window separating rounding noise from genuinely indefinite
// input: eigenvalues in [-kPsdClip, 0) are treated as zero, anything below
// is an error.
inline constexpr double kPsdClip = 1e-10;

// --------------------------- elementary helpers -----------------------------

// Equality within an explicit absolute Frobenius tolerance. No default on
// purpose: callers must state the tolerance they mean.
template <class DerivedA, class DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a,
                  const Eigen::MatrixBase<DerivedB>& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return (a - b).norm() <= tol;
}

// (m + m†)/2
template <class Derived>
DenseMatrix<typename Derived::Scalar> hermitize(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitize: matrix must be square");
    return 0.5 * (m + m.adjoint()).eval();
}

// ||m - m†||_F
double hermiticity_error(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

// Block-diagonal [[a, 0], [0, b]]; either block may be 0x0.
Matrix direct_sum(const Matrix& a, const Matrix& b);

// ------------------------- Hermitian eigensystem ----------------------------

struct HermitianEig {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // unitary, columns
};

// Eigendecomposition of hermitize(m). Throws if m is not square.
HermitianEig hermitian_eig(const Matrix& m);

// Smallest eigenvalue of hermitize(m); +inf for a 0x0 matrix.
double min_eigenvalue(const Matrix& m);

// Hermitian PSD square root. Input must be Hermitian within 1e-9 and have
// eigenvalues >= -clip; eigenvalues in [-clip, 0) are clipped to zero.
Matrix psd_sqrt(const Matrix& m, double clip = kPsdClip);

// Rank-revealing PSD factor: columns L_i = sqrt(lambda_i) v_i for eigenvalues
// above support_cut, so L L† = m on its numerical support. Dropping the
// sub-cutoff spectrum keeps square roots of rounding noise out of downstream
// singular values. Same Hermiticity/PSD checks as psd_sqrt.
Matrix psd_factor(const Matrix& m, double support_cut = 1e-12);

// ------------------------------ partial trace -------------------------------

// Trace over the second tensor factor of a (dim_a*dim_b)-dimensional space
// with basis index a*dim_b + b. Returns a dim_a x dim_a matrix.
Matrix partial_trace_b(const Matrix& m, int dim_a, int dim_b);

// --------------------------- random generators ------------------------------

// i.i.d. standard complex Gaussian entries.
Matrix ginibre(int rows, int cols, RngStream& rng);

// Haar-distributed unitary: QR of a Ginibre draw with the R diagonal's
// phases pushed into Q.
Matrix haar_unitary(int dim, RngStream& rng);

// G G† / Tr(G G†) for a dim x rank Ginibre draw: Hermitian, PSD, unit trace,
// rank <= rank.
Matrix random_density(int dim, int rank, RngStream& rng);

// n Kraus operators of a random CPTP map on dim dimensions, obtained by
// slicing a Haar isometry from dim to n*dim dimensions into n blocks.
std::vector<Matrix> random_kraus_set(int dim, int n, RngStream& rng);

// Random POVM with the given number of outcomes: Wishart elements whitened
// by the inverse square root of their sum.
std::vector<Matrix> random_povm(int dim, int outcomes, RngStream& rng);

}  // namespace subfid
