#pragma once

// Out-of-equilibrium temperature of finite-dimensional quantum systems.
//
// The temperature is 1/T = dS/dE taken at fixed eigenvectors of rho and fixed
// expectations of N-2 complementary observables. With M the matrix of
// diagonal elements (in the eigenbasis of rho) of H, each O^k, and a final
// row of ones, the populations solve M lambda = (E, <O^1>, ..., 1) and
//
//     T = -1 / sum_j (M^-1)_{j0} ln lambda_j      (k_B = 1).

#include <span>
#include <string_view>
#include <vector>

#include "qthermo/states.hpp"

namespace qthermo {

/// Hamiltonian plus the complementary observables that define a temperature.
struct ThermoContext {
    ComplexMatrix hamiltonian;
    ObservableSet observables;

    /// Validates Hermiticity and the N-2 observable count.
    static ThermoContext make(ComplexMatrix hamiltonian, std::vector<Observable> observables = {},
                              const Tolerances &tol = default_tolerances());

    [[nodiscard]] Eigen::Index dim() const noexcept { return hamiltonian.rows(); }
    /// [H, O^1, ..., O^{N-2}]; the order used to split degenerate eigenspaces of rho.
    [[nodiscard]] std::vector<ComplexMatrix> tie_breakers() const;
};

struct MMatrix {
    RealMatrix m;       // row 0: H_jj, rows 1..N-2: O^k_jj, row N-1: ones
    double     det = 0.0;
};

enum class TemperatureKind { finite, zero_pure_limit, infinite_mixed_limit };

[[nodiscard]] std::string_view to_string(TemperatureKind kind) noexcept;

struct TemperatureDiagnostics {
    double det_m          = 0.0;
    double min_eigenvalue = 0.0;
    double condition      = 0.0; // kappa_inf(M); 0 when not computed
    bool   degenerate_subspace = false; // rho had an eigenvalue cluster; basis fixed by tie-break
    bool   degenerate_hamiltonian_diagonal = false; // qubit H11 == H22: T reported as exactly 0
};

struct TemperatureResult {
    TemperatureKind        kind  = TemperatureKind::finite;
    double                 value = 0.0; // 0 for zero_pure_limit, +inf for infinite_mixed_limit
    TemperatureDiagnostics diagnostics;

    [[nodiscard]] bool is_finite() const noexcept { return kind == TemperatureKind::finite; }
};

/// Eigendecomposition of rho with degeneracies split by ctx.tie_breakers().
[[nodiscard]] EigenDecomposition natural_basis(const DensityMatrix &rho, const ThermoContext &ctx,
                                               const Tolerances &tol = default_tolerances());

[[nodiscard]] MMatrix build_m(const EigenDecomposition &basis, const ThermoContext &ctx,
                              const Tolerances &tol = default_tolerances());
[[nodiscard]] MMatrix build_m(const DensityMatrix &rho, const ThermoContext &ctx,
                              const Tolerances &tol = default_tolerances());

/// Throws SingularM when |det M| < tol.singular_m * max|M|^N.
void require_nonsingular(const MMatrix &mm, const Tolerances &tol = default_tolerances());

/// Gamma = (E, <O^1>, ..., <O^{N-2}>, 1).
[[nodiscard]] RealVector constraint_vector(const DensityMatrix &rho, const ThermoContext &ctx);

/// Lambda = M^-1 Gamma.
[[nodiscard]] Populations populations_from_constraints(const MMatrix &mm, const RealVector &gamma,
                                                       const Tolerances &tol = default_tolerances());

/// General-N temperature. Throws SingularM; otherwise classifies the pure
/// (min lambda < tol.pure_eigenvalue) and maximally mixed limits.
[[nodiscard]] TemperatureResult temperature_general(const DensityMatrix &rho, const ThermoContext &ctx,
                                                    const Tolerances &tol = default_tolerances());

/// H = diag(-epsilon, epsilon) in the (g, e) basis.
[[nodiscard]] ComplexMatrix two_level_hamiltonian(double epsilon);

/// T = (H11 - H22) / ln(lambda2 / lambda1) in the eigenbasis of rho.
[[nodiscard]] TemperatureResult temperature_qubit(const DensityMatrix &rho, const ComplexMatrix &h,
                                                  const Tolerances &tol = default_tolerances());

/// T = epsilon w / (B atanh B) for H = diag(-epsilon, epsilon).
[[nodiscard]] TemperatureResult temperature_qubit_bloch(const BlochVector &b, double epsilon,
                                                        const Tolerances &tol = default_tolerances());

/// Earlier fixed-Hamiltonian definition, T = epsilon B / (w atanh B). Throws ZeroW.
[[nodiscard]] TemperatureResult temperature_qubit_legacy(const BlochVector &b, double epsilon,
                                                         const Tolerances &tol = default_tolerances());

/// Explicit 3x3 formulas: determinant, first column of M^-1 and populations by
/// cofactors, evaluated from the diagonal entries of M.
struct QutritClosedForm {
    double     det = 0.0;
    RealVector first_column; // d lambda_j / dE
    RealVector populations;  // lambda_j(E, <O>)
};

[[nodiscard]] QutritClosedForm qutrit_closed_form(const MMatrix &mm, double energy, double observable_mean);

/// Three-level temperature by the closed form. Throws SingularM.
[[nodiscard]] TemperatureResult temperature_qutrit(const DensityMatrix &rho, const ComplexMatrix &h,
                                                   const ComplexMatrix &o,
                                                   const Tolerances &tol = default_tolerances());

/// Energy eigenvalues (ascending) and the populations <E_j|rho|E_j>.
struct EnergyBasisPopulations {
    RealVector energies;
    RealVector populations;
};

/// Throws DegenerateSpectrum when two energies are closer than tol.degeneracy_gap.
[[nodiscard]] EnergyBasisPopulations energy_basis_populations(const DensityMatrix &rho, const ComplexMatrix &h,
                                                              const Tolerances &tol = default_tolerances());

/// Spectral temperature tau from energy-basis populations and strictly increasing energies.
[[nodiscard]] double temperature_spectral(const Populations &populations, const RealVector &energies,
                                          const Tolerances &tol = default_tolerances());
[[nodiscard]] double temperature_spectral(const DensityMatrix &rho, const ComplexMatrix &h,
                                          const Tolerances &tol = default_tolerances());

struct HeatCapacity {
    double value = 0.0;
    bool   zero_temperature_limit = false;
};

/// C = [x / cosh x]^2 with x = epsilon cos(theta) / T.
[[nodiscard]] HeatCapacity heat_capacity(double epsilon, double theta, double temperature);

struct IsothermPoint {
    double modulus; // B
    double theta;   // polar angle, radians
};

/// Points (B, theta) of the surface of constant T (symmetric in the azimuth).
/// B is sampled at k/(sample_count+1), k = 1..sample_count; only B with
/// |(T/epsilon) atanh B| <= 1 are emitted. Throws NoSolution if none qualify.
[[nodiscard]] std::vector<IsothermPoint> isotherm_samples(double temperature, double epsilon, int sample_count);

} // namespace qthermo
