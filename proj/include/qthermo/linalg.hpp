#pragma once

// Dense complex linear algebra for small Hermitian systems.

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "qthermo/error.hpp"
#include "qthermo/tolerances.hpp"

namespace qthermo {

using Complex       = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix    = Eigen::MatrixXd;
using RealVector    = Eigen::VectorXd;

/// Eigenvalues sorted descending; column j of `eigenvectors` pairs with
/// eigenvalue j. In every column the entry of largest modulus is real and
/// non-negative.
struct EigenDecomposition {
    RealVector    eigenvalues;
    ComplexMatrix eigenvectors;
    /// True when at least one eigenvalue cluster (gap < degeneracy_gap) was found.
    bool degenerate = false;

    [[nodiscard]] Eigen::Index dim() const { return eigenvalues.size(); }
    [[nodiscard]] ComplexMatrix reconstruct() const;
};

[[nodiscard]] double max_abs(const ComplexMatrix &m);
[[nodiscard]] double max_abs(const RealMatrix &m);
/// max_ij |m_ij - conj(m_ji)|
[[nodiscard]] double hermiticity_defect(const ComplexMatrix &m);
[[nodiscard]] bool is_hermitian(const ComplexMatrix &m, double tol);
[[nodiscard]] bool all_finite(const ComplexMatrix &m);

/// Throws WrongDimension / NonFinite / NotHermitian naming `what`.
void require_hermitian(const ComplexMatrix &m, const Tolerances &tol, const char *what);

/// Hermitian eigendecomposition.
///
/// Within a degenerate cluster the basis is fixed deterministically by
/// diagonalizing each matrix of `tie_breakers` in turn, restricted to the
/// cluster (later matrices only split what earlier ones left degenerate).
/// Eigenvalues keep the solver's values; within a cluster their pairing with
/// the refined vectors is exact only up to the cluster width.
///
/// The backend is Eigen's SelfAdjointEigenSolver (Householder tridiagonal
/// reduction followed by implicit symmetric QR, capped at 30*N iterations);
/// exceeding the cap raises NoConvergence.
[[nodiscard]] EigenDecomposition eig_hermitian(const ComplexMatrix &m,
                                               std::span<const ComplexMatrix> tie_breakers = {},
                                               const Tolerances &tol = default_tolerances());

/// Solves m x = rhs with full-pivot LU. SingularMatrix when the pivot ratio
/// min|u_ii| / max|u_ii| drops below tol.singular_pivot, or when the residual
/// check fails.
[[nodiscard]] ComplexVector solve_linear(const ComplexMatrix &m, const ComplexVector &rhs,
                                         const Tolerances &tol = default_tolerances());
[[nodiscard]] RealVector solve_linear(const RealMatrix &m, const RealVector &rhs,
                                      const Tolerances &tol = default_tolerances());

/// Inverse with the same singularity rules; also verifies |m m^-1 - I| < tol.solve_residual.
[[nodiscard]] ComplexMatrix invert(const ComplexMatrix &m, const Tolerances &tol = default_tolerances());
[[nodiscard]] RealMatrix invert(const RealMatrix &m, const Tolerances &tol = default_tolerances());

/// exp(scale * m) for Hermitian m, through the spectral decomposition.
[[nodiscard]] ComplexMatrix herm_exp(const ComplexMatrix &m, double scale,
                                     const Tolerances &tol = default_tolerances());

/// kappa_inf(m) = |m|_inf |m^-1|_inf for an already-inverted pair.
[[nodiscard]] double condition_inf(const RealMatrix &m, const RealMatrix &inverse);

} // namespace qthermo
