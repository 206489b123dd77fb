#include "qthermo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qthermo {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols, const char *what) {
    if (rows != cols || rows == 0) {
        throw Error(ErrorCode::WrongDimension, std::string(what) + " must be a non-empty square matrix, got " +
                                                   std::to_string(rows) + "x" + std::to_string(cols));
    }
}

// Rotate a column so its largest-modulus entry is real and non-negative. Ties
// in modulus resolve to the lowest index.
void fix_phase(Eigen::Ref<ComplexVector> v) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v(i)));
    if (best == 0.0) return;
    Eigen::Index pivot = 0;
    while (std::abs(v(pivot)) < best - 1e-12) ++pivot;
    const Complex phase = std::conj(v(pivot)) / std::abs(v(pivot));
    v *= phase;
    v(pivot) = Complex(std::abs(v(pivot)), 0.0);
}

// Ascending Eigen output -> descending (values, vectors).
void eigh_descending(const ComplexMatrix &m, RealVector &values, ComplexMatrix &vectors) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge within 30*N iterations");
    }
    values  = solver.eigenvalues().reverse();
    vectors = solver.eigenvectors().rowwise().reverse();
}

template <class Fn>
void for_each_cluster(const RealVector &values, double gap, Fn &&fn) {
    Eigen::Index start = 0;
    const Eigen::Index n = values.size();
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && values(end - 1) - values(end) < gap) ++end;
        fn(start, end - start);
        start = end;
    }
}

void refine_cluster(Eigen::Ref<ComplexMatrix> basis, std::span<const ComplexMatrix> tie_breakers,
                    std::size_t which, double gap) {
    if (which >= tie_breakers.size() || basis.cols() < 2) return;
    ComplexMatrix restricted = basis.adjoint() * tie_breakers[which] * basis;
    restricted               = (0.5 * (restricted + restricted.adjoint())).eval();
    RealVector    sub_values;
    ComplexMatrix sub_vectors;
    eigh_descending(restricted, sub_values, sub_vectors);
    basis = (basis * sub_vectors).eval();
    for_each_cluster(sub_values, gap, [&](Eigen::Index start, Eigen::Index size) {
        if (size > 1) refine_cluster(basis.middleCols(start, size), tie_breakers, which + 1, gap);
    });
}

template <class Matrix>
void check_pivots(const Eigen::FullPivLU<Matrix> &lu, const Tolerances &tol) {
    const auto   pivots = lu.matrixLU().diagonal().cwiseAbs().eval();
    const double largest  = pivots.maxCoeff();
    const double smallest = pivots.minCoeff();
    if (!(largest > 0.0) || smallest < tol.singular_pivot * largest) {
        throw Error(ErrorCode::SingularMatrix, "pivot ratio " + std::to_string(largest > 0 ? smallest / largest : 0.0) +
                                                   " below " + std::to_string(tol.singular_pivot));
    }
}

template <class Matrix, class Vector>
Vector solve_impl(const Matrix &m, const Vector &rhs, const Tolerances &tol) {
    require_square(m.rows(), m.cols(), "linear system matrix");
    if (rhs.size() != m.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "rhs length " + std::to_string(rhs.size()) + " != " +
                                                      std::to_string(m.rows()));
    }
    if (!m.allFinite() || !rhs.allFinite()) throw Error(ErrorCode::NonFinite, "linear system has non-finite entries");
    Eigen::FullPivLU<Matrix> lu(m);
    check_pivots(lu, tol);
    Vector       x        = lu.solve(rhs);
    const double rhs_norm = rhs.size() ? rhs.cwiseAbs().maxCoeff() : 0.0;
    const double residual = (m * x - rhs).cwiseAbs().maxCoeff();
    if (!(residual < tol.solve_residual * (1.0 + rhs_norm))) {
        throw Error(ErrorCode::SingularMatrix, "residual " + std::to_string(residual) + " exceeds tolerance");
    }
    return x;
}

template <class Matrix>
Matrix invert_impl(const Matrix &m, const Tolerances &tol) {
    require_square(m.rows(), m.cols(), "matrix to invert");
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix to invert has non-finite entries");
    Eigen::FullPivLU<Matrix> lu(m);
    check_pivots(lu, tol);
    Matrix       inv    = lu.inverse();
    const double defect = (m * inv - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
    if (!(defect < tol.solve_residual)) {
        throw Error(ErrorCode::SingularMatrix, "|m m^-1 - I| = " + std::to_string(defect) + " exceeds tolerance");
    }
    return inv;
}

} // namespace

ComplexMatrix EigenDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double max_abs(const ComplexMatrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const RealMatrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double hermiticity_defect(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
}

bool is_hermitian(const ComplexMatrix &m, double tol) { return hermiticity_defect(m) <= tol; }

bool all_finite(const ComplexMatrix &m) { return m.allFinite(); }

void require_hermitian(const ComplexMatrix &m, const Tolerances &tol, const char *what) {
    require_square(m.rows(), m.cols(), what);
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
    const double defect = hermiticity_defect(m);
    if (defect > tol.hermitian) {
        throw Error(ErrorCode::NotHermitian,
                    std::string(what) + " is not Hermitian (max |m - m^dagger| = " + std::to_string(defect) + ")");
    }
}

EigenDecomposition eig_hermitian(const ComplexMatrix &m, std::span<const ComplexMatrix> tie_breakers,
                                 const Tolerances &tol) {
    require_hermitian(m, tol, "eigenproblem matrix");
    for (const auto &tb : tie_breakers) {
        if (tb.rows() != m.rows() || tb.cols() != m.cols()) {
            throw Error(ErrorCode::DimensionMismatch, "tie-break operator dimension differs from matrix");
        }
        require_hermitian(tb, tol, "tie-break operator");
    }

    EigenDecomposition out;
    eigh_descending(m, out.eigenvalues, out.eigenvectors);

    for_each_cluster(out.eigenvalues, tol.degeneracy_gap, [&](Eigen::Index start, Eigen::Index size) {
        if (size < 2) return;
        out.degenerate = true;
        refine_cluster(out.eigenvectors.middleCols(start, size), tie_breakers, 0, tol.degeneracy_gap);
    });

    for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j) fix_phase(out.eigenvectors.col(j));
    return out;
}

ComplexVector solve_linear(const ComplexMatrix &m, const ComplexVector &rhs, const Tolerances &tol) {
    return solve_impl(m, rhs, tol);
}

RealVector solve_linear(const RealMatrix &m, const RealVector &rhs, const Tolerances &tol) {
    return solve_impl(m, rhs, tol);
}

ComplexMatrix invert(const ComplexMatrix &m, const Tolerances &tol) { return invert_impl(m, tol); }

RealMatrix invert(const RealMatrix &m, const Tolerances &tol) { return invert_impl(m, tol); }

ComplexMatrix herm_exp(const ComplexMatrix &m, double scale, const Tolerances &tol) {
    if (!std::isfinite(scale)) throw Error(ErrorCode::NonFinite, "herm_exp scale must be finite");
    const EigenDecomposition eig = eig_hermitian(m, {}, tol);
    const RealVector         f   = (scale * eig.eigenvalues).array().exp().matrix();
    ComplexMatrix out = eig.eigenvectors * f.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    return 0.5 * (out + out.adjoint());
}

double condition_inf(const RealMatrix &m, const RealMatrix &inverse) {
    const auto row_norm = [](const RealMatrix &a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); };
    return row_norm(m) * row_norm(inverse);
}

} // namespace qthermo
