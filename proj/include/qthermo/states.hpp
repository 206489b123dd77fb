#pragma once

// Quantum states and observables with validation.

#include <string>
#include <string_view>
#include <vector>

#include "qthermo/linalg.hpp"

namespace qthermo {

/// Hermitian, unit-trace, positive-semidefinite matrix. Only constructible
/// through validation, so every instance satisfies the invariants.
class DensityMatrix {
  public:
    /// Throws NotHermitian, TraceNotOne or NotPositive (plus WrongDimension /
    /// NonFinite for malformed input).
    static DensityMatrix from_matrix(const ComplexMatrix &m, const Tolerances &tol = default_tolerances());

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return mat_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return mat_.rows(); }

  private:
    explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {}
    ComplexMatrix mat_;
};

inline DensityMatrix density_from_matrix(const ComplexMatrix &m, const Tolerances &tol = default_tolerances()) {
    return DensityMatrix::from_matrix(m, tol);
}

/// Qubit Bloch coordinates in the (g, e) energy basis.
struct BlochVector {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;

    [[nodiscard]] double modulus() const;
};

/// Throws BlochOutOfBall if |b| > 1 + tol.bloch_radius, NonFinite for NaN/Inf.
void require_in_ball(const BlochVector &b, const Tolerances &tol = default_tolerances());

/// rho = 1/2 [(1+w)|g><g| + (u-iv)|g><e| + (u+iv)|e><g| + (1-w)|e><e|], index 0 = g.
[[nodiscard]] DensityMatrix qubit_from_bloch(const BlochVector &b, const Tolerances &tol = default_tolerances());
[[nodiscard]] BlochVector bloch_from_qubit(const DensityMatrix &rho);

/// Labelled Hermitian operator.
struct Observable {
    std::string   label;
    ComplexMatrix matrix;
};

/// The N-2 complementary observables held fixed when differentiating S(E).
class ObservableSet {
  public:
    ObservableSet() = default;
    /// Throws WrongDimension unless observables.size() == dim - 2 and every
    /// member is dim x dim; NotHermitian for a non-Hermitian member.
    ObservableSet(std::vector<Observable> observables, Eigen::Index dim,
                  const Tolerances &tol = default_tolerances());

    [[nodiscard]] const std::vector<Observable> &members() const noexcept { return members_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] std::vector<ComplexMatrix> matrices() const;

  private:
    std::vector<Observable> members_;
};

/// Probabilities lambda_j in [-tol, 1 + tol] summing to 1.
class Populations {
  public:
    static Populations from_values(RealVector values, const Tolerances &tol = default_tolerances());
    [[nodiscard]] const RealVector &values() const noexcept { return values_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return values_.size(); }

  private:
    explicit Populations(RealVector v) : values_(std::move(v)) {}
    RealVector values_;
};

/// Real part of tr(rho X).
[[nodiscard]] double expectation(const DensityMatrix &rho, const ComplexMatrix &op);

/// S = -sum lambda ln lambda in nats; eigenvalues below tol.entropy_cutoff count as 0.
[[nodiscard]] double vn_entropy(const DensityMatrix &rho, const Tolerances &tol = default_tolerances());
[[nodiscard]] double shannon_entropy(const RealVector &probabilities, const Tolerances &tol = default_tolerances());

/// exp(-beta H) / Z with k_B = 1. Spectrum is shifted by its minimum before
/// exponentiating so large beta does not overflow.
[[nodiscard]] DensityMatrix thermal_state(const ComplexMatrix &h, double beta,
                                          const Tolerances &tol = default_tolerances());

/// The eight Gell-Mann matrices O1..O8 (labels "O1".."O8"), dim must be 3.
[[nodiscard]] std::vector<Observable> gell_mann(int dim);

/// Accepts "O1".."O8" or "1".."8"; throws InvalidArgument otherwise.
[[nodiscard]] Observable gell_mann_by_label(std::string_view label);

} // namespace qthermo
