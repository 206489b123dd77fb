#include "qthermo/states.hpp"

#include <cmath>
#include <numeric>

namespace qthermo {

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix &m, const Tolerances &tol) {
    require_hermitian(m, tol, "density matrix");
    const double trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
    if (trace_defect > tol.trace) {
        throw Error(ErrorCode::TraceNotOne, "density matrix trace differs from 1 by " + std::to_string(trace_defect));
    }
    ComplexMatrix hermitian = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "density matrix spectrum");
    const double smallest = solver.eigenvalues().minCoeff();
    if (smallest < -tol.positivity) {
        throw Error(ErrorCode::NotPositive, "density matrix has eigenvalue " + std::to_string(smallest));
    }
    return DensityMatrix(std::move(hermitian));
}

double BlochVector::modulus() const { return std::sqrt(u * u + v * v + w * w); }

void require_in_ball(const BlochVector &b, const Tolerances &tol) {
    if (!std::isfinite(b.u) || !std::isfinite(b.v) || !std::isfinite(b.w)) {
        throw Error(ErrorCode::NonFinite, "Bloch vector has non-finite components");
    }
    if (b.modulus() > 1.0 + tol.bloch_radius) {
        throw Error(ErrorCode::BlochOutOfBall, "Bloch vector modulus " + std::to_string(b.modulus()) + " exceeds 1");
    }
}

DensityMatrix qubit_from_bloch(const BlochVector &b, const Tolerances &tol) {
    require_in_ball(b, tol);
    ComplexMatrix m(2, 2);
    m(0, 0) = 0.5 * (1.0 + b.w);
    m(0, 1) = 0.5 * Complex(b.u, -b.v);
    m(1, 0) = 0.5 * Complex(b.u, b.v);
    m(1, 1) = 0.5 * (1.0 - b.w);
    return DensityMatrix::from_matrix(m, tol);
}

BlochVector bloch_from_qubit(const DensityMatrix &rho) {
    if (rho.dim() != 2) {
        throw Error(ErrorCode::WrongDimension, "Bloch coordinates need a qubit, got dim " + std::to_string(rho.dim()));
    }
    const ComplexMatrix &m = rho.matrix();
    return {2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

ObservableSet::ObservableSet(std::vector<Observable> observables, Eigen::Index dim, const Tolerances &tol)
    : members_(std::move(observables)) {
    if (dim < 2) throw Error(ErrorCode::WrongDimension, "observable set needs dim >= 2");
    if (static_cast<Eigen::Index>(members_.size()) != dim - 2) {
        throw Error(ErrorCode::WrongDimension, "dim " + std::to_string(dim) + " needs exactly " +
                                                   std::to_string(dim - 2) + " complementary observables, got " +
                                                   std::to_string(members_.size()));
    }
    for (const auto &o : members_) {
        if (o.matrix.rows() != dim || o.matrix.cols() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "observable " + o.label + " is not " + std::to_string(dim) +
                                                          "x" + std::to_string(dim));
        }
        require_hermitian(o.matrix, tol, ("observable " + o.label).c_str());
    }
}

std::vector<ComplexMatrix> ObservableSet::matrices() const {
    std::vector<ComplexMatrix> out;
    out.reserve(members_.size());
    for (const auto &o : members_) out.push_back(o.matrix);
    return out;
}

Populations Populations::from_values(RealVector values, const Tolerances &tol) {
    if (values.size() == 0) throw Error(ErrorCode::WrongDimension, "empty population vector");
    if (!values.allFinite()) throw Error(ErrorCode::NonFinite, "populations must be finite");
    for (Eigen::Index j = 0; j < values.size(); ++j) {
        if (values(j) < -tol.positivity || values(j) > 1.0 + tol.positivity) {
            throw Error(ErrorCode::NotPositive, "population " + std::to_string(j) + " = " +
                                                    std::to_string(values(j)) + " outside [0, 1]");
        }
    }
    if (std::abs(values.sum() - 1.0) > tol.populations_sum) {
        throw Error(ErrorCode::TraceNotOne, "populations sum to " + std::to_string(values.sum()));
    }
    return Populations(std::move(values));
}

double expectation(const DensityMatrix &rho, const ComplexMatrix &op) {
    if (op.rows() != rho.dim() || op.cols() != rho.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "operator and state dimensions differ");
    }
    return (rho.matrix() * op).trace().real();
}

double shannon_entropy(const RealVector &probabilities, const Tolerances &tol) {
    double s = 0.0;
    for (double p : probabilities) {
        if (p > tol.entropy_cutoff) s -= p * std::log(p);
    }
    return s;
}

double vn_entropy(const DensityMatrix &rho, const Tolerances &tol) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    return std::max(0.0, shannon_entropy(solver.eigenvalues(), tol));
}

DensityMatrix thermal_state(const ComplexMatrix &h, double beta, const Tolerances &tol) {
    if (!std::isfinite(beta)) throw Error(ErrorCode::NonFinite, "beta must be finite");
    const EigenDecomposition eig = eig_hermitian(h, {}, tol);
    // Shift by the energy that dominates the Boltzmann weights.
    const double reference = beta >= 0.0 ? eig.eigenvalues.minCoeff() : eig.eigenvalues.maxCoeff();
    RealVector   weights   = (-beta * (eig.eigenvalues.array() - reference)).exp().matrix();
    weights /= weights.sum();
    ComplexMatrix rho = eig.eigenvectors * weights.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    rho               = 0.5 * (rho + rho.adjoint());
    return DensityMatrix::from_matrix(rho, tol);
}

std::vector<Observable> gell_mann(int dim) {
    if (dim != 3) {
        throw Error(ErrorCode::WrongDimension, "built-in Gell-Mann family exists for dim 3 only, got " +
                                                   std::to_string(dim));
    }
    const Complex i(0.0, 1.0);
    std::vector<Observable> out(8);
    for (int k = 0; k < 8; ++k) {
        out[k].label  = "O" + std::to_string(k + 1);
        out[k].matrix = ComplexMatrix::Zero(3, 3);
    }
    out[0].matrix(0, 1) = out[0].matrix(1, 0) = 1.0;
    out[1].matrix(0, 1) = -i;
    out[1].matrix(1, 0) = i;
    out[2].matrix(0, 0) = 1.0;
    out[2].matrix(1, 1) = -1.0;
    out[3].matrix(0, 2) = out[3].matrix(2, 0) = 1.0;
    out[4].matrix(0, 2) = -i;
    out[4].matrix(2, 0) = i;
    out[5].matrix(1, 2) = out[5].matrix(2, 1) = 1.0;
    out[6].matrix(1, 2) = -i;
    out[6].matrix(2, 1) = i;
    const double s = 1.0 / std::sqrt(3.0);
    out[7].matrix(0, 0) = s;
    out[7].matrix(1, 1) = s;
    out[7].matrix(2, 2) = -2.0 * s;
    return out;
}

} // namespace qthermo

namespace qthermo {

Observable gell_mann_by_label(std::string_view label) {
    std::string_view digits = label;
    if (!digits.empty() && (digits.front() == 'O' || digits.front() == 'o')) digits.remove_prefix(1);
    if (digits.size() == 1 && digits.front() >= '1' && digits.front() <= '8') {
        return gell_mann(3)[static_cast<std::size_t>(digits.front() - '1')];
    }
    throw Error(ErrorCode::InvalidArgument, "unknown Gell-Mann label '" + std::string(label) + "'");
}

} // namespace qthermo
