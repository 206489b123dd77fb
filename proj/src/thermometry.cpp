#include "qthermo/thermometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qthermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double diagonal_element(const ComplexMatrix &op, const ComplexMatrix &vectors, Eigen::Index j,
                        const Tolerances &tol, const std::string &what) {
    const Complex value = vectors.col(j).dot(op * vectors.col(j)); // dot() conjugates the left operand
    if (std::abs(value.imag()) > tol.diagonal_real) {
        throw Error(ErrorCode::NotHermitian, what + " has a complex diagonal element in the eigenbasis of rho");
    }
    return value.real();
}

bool near_maximally_mixed(const RealVector &lambda, double tol) {
    const double uniform = 1.0 / static_cast<double>(lambda.size());
    return ((lambda.array() - uniform).abs() < tol).all();
}

TemperatureResult limit(TemperatureKind kind, TemperatureDiagnostics diag) {
    return {kind, kind == TemperatureKind::zero_pure_limit ? 0.0 : kInf, diag};
}

void require_dim(const DensityMatrix &rho, Eigen::Index expected, const char *what) {
    if (rho.dim() != expected) {
        throw Error(ErrorCode::WrongDimension, std::string(what) + " needs dim " + std::to_string(expected) +
                                                   ", got " + std::to_string(rho.dim()));
    }
}

} // namespace

std::string_view to_string(TemperatureKind kind) noexcept {
    switch (kind) {
    case TemperatureKind::finite: return "finite";
    case TemperatureKind::zero_pure_limit: return "zero_pure_limit";
    case TemperatureKind::infinite_mixed_limit: return "infinite_mixed_limit";
    }
    return "unknown";
}

ThermoContext ThermoContext::make(ComplexMatrix hamiltonian, std::vector<Observable> observables,
                                  const Tolerances &tol) {
    require_hermitian(hamiltonian, tol, "Hamiltonian");
    const Eigen::Index dim = hamiltonian.rows();
    if (dim < 2) throw Error(ErrorCode::WrongDimension, "Hamiltonian must be at least 2x2");
    return {std::move(hamiltonian), ObservableSet(std::move(observables), dim, tol)};
}

std::vector<ComplexMatrix> ThermoContext::tie_breakers() const {
    std::vector<ComplexMatrix> out;
    out.reserve(observables.size() + 1);
    out.push_back(hamiltonian);
    for (const auto &o : observables.members()) out.push_back(o.matrix);
    return out;
}

EigenDecomposition natural_basis(const DensityMatrix &rho, const ThermoContext &ctx, const Tolerances &tol) {
    if (rho.dim() != ctx.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "state dim " + std::to_string(rho.dim()) +
                                                      " != context dim " + std::to_string(ctx.dim()));
    }
    const auto tie = ctx.tie_breakers();
    return eig_hermitian(rho.matrix(), tie, tol);
}

MMatrix build_m(const EigenDecomposition &basis, const ThermoContext &ctx, const Tolerances &tol) {
    const Eigen::Index n = ctx.dim();
    if (basis.dim() != n) throw Error(ErrorCode::DimensionMismatch, "eigenbasis and context dimensions differ");
    MMatrix mm;
    mm.m = RealMatrix::Ones(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        mm.m(0, j) = diagonal_element(ctx.hamiltonian, basis.eigenvectors, j, tol, "Hamiltonian");
        for (std::size_t k = 0; k < ctx.observables.size(); ++k) {
            const auto &o = ctx.observables.members()[k];
            mm.m(static_cast<Eigen::Index>(k) + 1, j) = diagonal_element(o.matrix, basis.eigenvectors, j, tol,
                                                                         "observable " + o.label);
        }
    }
    mm.det = mm.m.determinant();
    return mm;
}

MMatrix build_m(const DensityMatrix &rho, const ThermoContext &ctx, const Tolerances &tol) {
    return build_m(natural_basis(rho, ctx, tol), ctx, tol);
}

void require_nonsingular(const MMatrix &mm, const Tolerances &tol) {
    const double scale     = std::pow(max_abs(mm.m), static_cast<double>(mm.m.rows()));
    const double threshold = tol.singular_m * scale;
    if (!(std::abs(mm.det) >= threshold)) {
        throw Error(ErrorCode::SingularM, "det M = " + std::to_string(mm.det) + " below " + std::to_string(threshold) +
                                              "; the observables do not determine the populations");
    }
}

RealVector constraint_vector(const DensityMatrix &rho, const ThermoContext &ctx) {
    const Eigen::Index n = ctx.dim();
    if (rho.dim() != n) throw Error(ErrorCode::DimensionMismatch, "state and context dimensions differ");
    RealVector gamma(n);
    gamma(0) = expectation(rho, ctx.hamiltonian);
    for (std::size_t k = 0; k < ctx.observables.size(); ++k) {
        gamma(static_cast<Eigen::Index>(k) + 1) = expectation(rho, ctx.observables.members()[k].matrix);
    }
    gamma(n - 1) = 1.0;
    return gamma;
}

Populations populations_from_constraints(const MMatrix &mm, const RealVector &gamma, const Tolerances &tol) {
    if (gamma.size() != mm.m.rows()) throw Error(ErrorCode::DimensionMismatch, "Gamma length differs from M");
    require_nonsingular(mm, tol);
    try {
        return Populations::from_values(solve_linear(mm.m, gamma, tol), tol);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::SingularMatrix) throw Error(ErrorCode::SingularM, e.what());
        throw;
    }
}

TemperatureResult temperature_general(const DensityMatrix &rho, const ThermoContext &ctx, const Tolerances &tol) {
    const EigenDecomposition basis = natural_basis(rho, ctx, tol);
    const MMatrix            mm    = build_m(basis, ctx, tol);
    require_nonsingular(mm, tol);

    RealMatrix inverse;
    try {
        inverse = invert(mm.m, tol);
    } catch (const Error &e) {
        if (e.code() == ErrorCode::SingularMatrix) throw Error(ErrorCode::SingularM, e.what());
        throw;
    }

    const RealVector &lambda = basis.eigenvalues;
    TemperatureDiagnostics diag;
    diag.det_m               = mm.det;
    diag.min_eigenvalue      = lambda.minCoeff();
    diag.condition           = condition_inf(mm.m, inverse);
    diag.degenerate_subspace = basis.degenerate;

    if (diag.min_eigenvalue < tol.pure_eigenvalue) return limit(TemperatureKind::zero_pure_limit, diag);
    if (near_maximally_mixed(lambda, tol.mixed_eigenvalue)) return limit(TemperatureKind::infinite_mixed_limit, diag);

    double denominator = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) denominator += inverse(j, 0) * std::log(lambda(j));
    if (denominator == 0.0) return limit(TemperatureKind::infinite_mixed_limit, diag);
    return {TemperatureKind::finite, -1.0 / denominator, diag};
}

ComplexMatrix two_level_hamiltonian(double epsilon) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0)         = -epsilon;
    h(1, 1)         = epsilon;
    return h;
}

TemperatureResult temperature_qubit(const DensityMatrix &rho, const ComplexMatrix &h, const Tolerances &tol) {
    require_dim(rho, 2, "qubit temperature");
    const ThermoContext      ctx   = ThermoContext::make(h, {}, tol);
    const EigenDecomposition basis = natural_basis(rho, ctx, tol);
    const double lambda1 = basis.eigenvalues(0);
    const double lambda2 = basis.eigenvalues(1);
    const double h11     = diagonal_element(h, basis.eigenvectors, 0, tol, "Hamiltonian");
    const double h22     = diagonal_element(h, basis.eigenvectors, 1, tol, "Hamiltonian");

    TemperatureDiagnostics diag;
    diag.det_m               = h11 - h22;
    diag.min_eigenvalue      = lambda2;
    diag.degenerate_subspace = basis.degenerate;

    if (lambda2 < tol.pure_eigenvalue) return limit(TemperatureKind::zero_pure_limit, diag);
    if (lambda1 - lambda2 < tol.qubit_tie) return limit(TemperatureKind::infinite_mixed_limit, diag);
    if (std::abs(h11 - h22) < tol.diagonal_tie) {
        diag.degenerate_hamiltonian_diagonal = true;
        return {TemperatureKind::finite, 0.0, diag};
    }
    return {TemperatureKind::finite, (h11 - h22) / std::log(lambda2 / lambda1), diag};
}

TemperatureResult temperature_qubit_bloch(const BlochVector &b, double epsilon, const Tolerances &tol) {
    require_in_ball(b, tol);
    if (!std::isfinite(epsilon)) throw Error(ErrorCode::NonFinite, "epsilon must be finite");
    const double modulus = std::min(b.modulus(), 1.0);
    TemperatureDiagnostics diag;
    diag.det_m          = -2.0 * epsilon * (modulus > 0.0 ? b.w / modulus : 0.0);
    diag.min_eigenvalue = 0.5 * (1.0 - modulus);

    if (diag.min_eigenvalue < tol.pure_eigenvalue) return limit(TemperatureKind::zero_pure_limit, diag);
    if (modulus < tol.qubit_tie) return limit(TemperatureKind::infinite_mixed_limit, diag);
    return {TemperatureKind::finite, epsilon * b.w / (modulus * std::atanh(modulus)), diag};
}

TemperatureResult temperature_qubit_legacy(const BlochVector &b, double epsilon, const Tolerances &tol) {
    require_in_ball(b, tol);
    if (!std::isfinite(epsilon)) throw Error(ErrorCode::NonFinite, "epsilon must be finite");
    if (b.w == 0.0) throw Error(ErrorCode::ZeroW, "legacy qubit temperature diverges for w = 0");
    const double modulus = std::min(b.modulus(), 1.0);
    TemperatureDiagnostics diag;
    diag.min_eigenvalue = 0.5 * (1.0 - modulus);
    if (diag.min_eigenvalue < tol.pure_eigenvalue) return limit(TemperatureKind::zero_pure_limit, diag);
    return {TemperatureKind::finite, epsilon * modulus / (b.w * std::atanh(modulus)), diag};
}

QutritClosedForm qutrit_closed_form(const MMatrix &mm, double energy, double observable_mean) {
    if (mm.m.rows() != 3 || mm.m.cols() != 3) throw Error(ErrorCode::WrongDimension, "qutrit closed form needs 3x3 M");
    const double h1 = mm.m(0, 0), h2 = mm.m(0, 1), h3 = mm.m(0, 2);
    const double o1 = mm.m(1, 0), o2 = mm.m(1, 1), o3 = mm.m(1, 2);
    const double e = energy, o = observable_mean;

    QutritClosedForm out;
    out.det          = h1 * (o2 - o3) + h2 * (o3 - o1) + h3 * (o1 - o2);
    out.first_column = RealVector(3);
    out.first_column << (o2 - o3) / out.det, (o3 - o1) / out.det, (o1 - o2) / out.det;
    out.populations = RealVector(3);
    out.populations << (h2 * o3 - h3 * o2 + e * (o2 - o3) + o * (h3 - h2)) / out.det,
        (h3 * o1 - h1 * o3 + e * (o3 - o1) + o * (h1 - h3)) / out.det,
        (h1 * o2 - h2 * o1 + e * (o1 - o2) + o * (h2 - h1)) / out.det;
    return out;
}

TemperatureResult temperature_qutrit(const DensityMatrix &rho, const ComplexMatrix &h, const ComplexMatrix &o,
                                     const Tolerances &tol) {
    require_dim(rho, 3, "qutrit temperature");
    const ThermoContext      ctx   = ThermoContext::make(h, {{"O", o}}, tol);
    const EigenDecomposition basis = natural_basis(rho, ctx, tol);
    MMatrix                  mm    = build_m(basis, ctx, tol);
    const QutritClosedForm   cf    = qutrit_closed_form(mm, 0.0, 0.0);
    mm.det                         = cf.det;
    require_nonsingular(mm, tol);

    const RealVector &lambda = basis.eigenvalues;
    TemperatureDiagnostics diag;
    diag.det_m               = cf.det;
    diag.min_eigenvalue      = lambda.minCoeff();
    diag.degenerate_subspace = basis.degenerate;
    if (diag.min_eigenvalue < tol.pure_eigenvalue) return limit(TemperatureKind::zero_pure_limit, diag);
    if (near_maximally_mixed(lambda, tol.mixed_eigenvalue)) return limit(TemperatureKind::infinite_mixed_limit, diag);

    const double h1 = mm.m(0, 0), h2 = mm.m(0, 1), h3 = mm.m(0, 2);
    const double o1 = mm.m(1, 0), o2 = mm.m(1, 1), o3 = mm.m(1, 2);
    const double numerator   = o1 * (h3 - h2) + o2 * (h1 - h3) + o3 * (h2 - h1);
    const double denominator = o1 * std::log(lambda(1) / lambda(2)) + o2 * std::log(lambda(2) / lambda(0)) +
                               o3 * std::log(lambda(0) / lambda(1));
    if (denominator == 0.0) return limit(TemperatureKind::infinite_mixed_limit, diag);
    return {TemperatureKind::finite, numerator / denominator, diag};
}

EnergyBasisPopulations energy_basis_populations(const DensityMatrix &rho, const ComplexMatrix &h,
                                                const Tolerances &tol) {
    if (h.rows() != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "Hamiltonian and state dimensions differ");
    const EigenDecomposition eig = eig_hermitian(h, {}, tol);
    if (eig.degenerate) throw Error(ErrorCode::DegenerateSpectrum, "spectral temperature needs a non-degenerate H");
    const Eigen::Index n = eig.dim();
    EnergyBasisPopulations out{RealVector(n), RealVector(n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = n - 1 - j; // ascending energies
        out.energies(j)    = eig.eigenvalues(src);
        out.populations(j) = eig.eigenvectors.col(src).dot(rho.matrix() * eig.eigenvectors.col(src)).real();
    }
    return out;
}

double temperature_spectral(const Populations &populations, const RealVector &energies, const Tolerances &tol) {
    const RealVector &p = populations.values();
    const Eigen::Index n = p.size();
    if (energies.size() != n) throw Error(ErrorCode::DimensionMismatch, "energies and populations differ in length");
    if (n < 2) throw Error(ErrorCode::WrongDimension, "spectral temperature needs at least two levels");
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        if (!(energies(j + 1) - energies(j) > tol.degeneracy_gap)) {
            throw Error(ErrorCode::DegenerateSpectrum, "energies must be strictly increasing");
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (p(j) < tol.zero_population) {
            throw Error(ErrorCode::ZeroPopulation, "population of level " + std::to_string(j) + " vanishes");
        }
    }
    double sum = 0.0;
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
        sum += 0.5 * (p(j + 1) + p(j)) * std::log(p(j) / p(j + 1)) / (energies(j + 1) - energies(j));
    }
    const double inverse_tau = sum / (1.0 - 0.5 * (p(0) + p(n - 1)));
    return 1.0 / inverse_tau;
}

double temperature_spectral(const DensityMatrix &rho, const ComplexMatrix &h, const Tolerances &tol) {
    const EnergyBasisPopulations ebp = energy_basis_populations(rho, h, tol);
    return temperature_spectral(Populations::from_values(ebp.populations, tol), ebp.energies, tol);
}

HeatCapacity heat_capacity(double epsilon, double theta, double temperature) {
    if (!std::isfinite(epsilon) || !std::isfinite(theta) || std::isnan(temperature)) {
        throw Error(ErrorCode::NonFinite, "heat capacity arguments must be finite");
    }
    if (temperature == 0.0) return {0.0, true};
    const double x = epsilon * std::cos(theta) / temperature;
    const double ax = std::abs(x);
    // sech x = 2 e^{-|x|} / (1 + e^{-2|x|}) stays finite for large |x|.
    const double sech = 2.0 * std::exp(-ax) / (1.0 + std::exp(-2.0 * ax));
    const double r    = x * sech;
    return {r * r, false};
}

std::vector<IsothermPoint> isotherm_samples(double temperature, double epsilon, int sample_count) {
    if (!std::isfinite(temperature) || temperature == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "isotherm temperature must be finite and non-zero");
    }
    if (!std::isfinite(epsilon) || epsilon == 0.0) throw Error(ErrorCode::InvalidArgument, "epsilon must be non-zero");
    if (sample_count < 2) throw Error(ErrorCode::InvalidArgument, "isotherm needs at least 2 samples");

    std::vector<IsothermPoint> out;
    for (int k = 1; k <= sample_count; ++k) {
        const double modulus   = static_cast<double>(k) / static_cast<double>(sample_count + 1);
        const double cos_theta = (temperature / epsilon) * std::atanh(modulus);
        if (std::abs(cos_theta) <= 1.0) out.push_back({modulus, std::acos(cos_theta)});
    }
    if (out.empty()) {
        throw Error(ErrorCode::NoSolution, "no Bloch modulus in (0,1) reaches T = " + std::to_string(temperature));
    }
    return out;
}

} // namespace qthermo
