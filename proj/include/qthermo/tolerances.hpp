#pragma once

#include <cstddef>
#include <map>
#include <string>

namespace qthermo {

// Numerical thresholds used across the library. Defaults are the documented
// values; callers may pass a modified copy (the CLI exposes --tol name=value).
struct Tolerances {
    double hermitian          = 1e-10; // max |m - m^dagger| entry
    double degeneracy_gap     = 1e-9;  // eigenvalues closer than this form a cluster
    double singular_pivot     = 1e-12; // LU pivot ratio below which a solve is singular
    double solve_residual     = 1e-9;  // |m x - b|_inf <= tol * (1 + |b|_inf)
    double trace              = 1e-10; // |tr(rho) - 1|
    double positivity         = 1e-10; // eigenvalues of a state must be >= -positivity
    double bloch_radius       = 1e-10; // B <= 1 + bloch_radius
    double diagonal_real      = 1e-10; // imaginary part allowed on <psi|X|psi>
    double pure_eigenvalue    = 1e-12; // min eigenvalue below this => T = 0 limit
    double mixed_eigenvalue   = 1e-12; // all |lambda - 1/N| below this => T = inf limit
    double qubit_tie          = 1e-14; // |lambda1 - lambda2| below this => T = inf (qubit)
    double singular_m         = 1e-12; // |det M| < singular_m * max|M|^N => SingularM
    double diagonal_tie       = 1e-12; // H11 == H22 in the qubit closed form
    double entropy_cutoff     = 1e-15; // eigenvalues below contribute 0 ln 0 = 0
    double zero_population    = 1e-300;
    double coin_normalization = 1e-6;  // |a0|^2 + |b0|^2 + |c0|^2 == 1
    double populations_sum    = 1e-9;

    // Named access for configuration files and the run manifest.
    [[nodiscard]] std::map<std::string, double> as_map() const;
    // Throws Error(InvalidArgument) for an unknown name.
    void set(const std::string &name, double value);
};

inline const Tolerances &default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

} // namespace qthermo
