#include "qthermo/qwalk.hpp"

#include <cmath>
#include <numbers>

namespace qthermo {

WalkConfig WalkConfig::defaults() {
    WalkConfig cfg;
    const double a = -0.192743;
    cfg.a0 = cfg.c0 = Complex(a, 0.0);
    cfg.b0 = Complex(std::sqrt(1.0 - 2.0 * a * a), 0.0);
    cfg.lattice_half_width = cfg.minimum_half_width();
    return cfg;
}

int WalkConfig::minimum_half_width() const {
    return steps + static_cast<int>(std::ceil(6.0 * sigma));
}

void WalkConfig::validate(const Tolerances &tol) const {
    if (!std::isfinite(sigma) || !(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
    if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be non-negative");
    for (const Complex &z : {a0, b0, c0}) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::NonFinite, "initial chirality amplitudes must be finite");
        }
    }
    const double norm = std::norm(a0) + std::norm(b0) + std::norm(c0);
    if (std::abs(norm - 1.0) > tol.coin_normalization) {
        throw Error(ErrorCode::InvalidArgument, "|a0|^2 + |b0|^2 + |c0|^2 = " + std::to_string(norm) + ", expected 1");
    }
    if (lattice_half_width < minimum_half_width()) {
        throw Error(ErrorCode::LatticeTooSmall, "half width " + std::to_string(lattice_half_width) +
                                                    " < steps + 6 sigma = " + std::to_string(minimum_half_width()));
    }
}

double WalkState::norm_squared() const {
    double total = 0.0;
    for (const auto &s : sites_) total += std::norm(s[0]) + std::norm(s[1]) + std::norm(s[2]);
    return total;
}

double WalkState::probability(int n) const {
    const auto &s = site(n);
    return std::norm(s[0]) + std::norm(s[1]) + std::norm(s[2]);
}

ComplexMatrix grover_coin() {
    ComplexMatrix g = ComplexMatrix::Constant(3, 3, Complex(2.0 / 3.0, 0.0));
    g.diagonal().setConstant(Complex(-1.0 / 3.0, 0.0));
    return g;
}

WalkState init_gaussian(const WalkConfig &cfg, const Tolerances &tol) {
    cfg.validate(tol);
    WalkState    state(cfg.lattice_half_width);
    const int    support = cfg.lattice_half_width - cfg.steps;
    const double prefactor = 1.0 / std::pow(2.0 * std::numbers::pi * cfg.sigma * cfg.sigma, 0.25);
    for (int n = -support; n <= support; ++n) {
        const double g = prefactor * std::exp(-static_cast<double>(n) * n / (4.0 * cfg.sigma * cfg.sigma));
        state.site(n) = {g * cfg.a0, g * cfg.b0, g * cfg.c0};
    }
    const double scale = 1.0 / std::sqrt(state.norm_squared());
    for (auto &s : state.sites()) {
        for (auto &z : s) z *= scale;
    }
    return state;
}

DensityMatrix reduce_coin(const WalkState &state, const Tolerances &tol) {
    return DensityMatrix::from_matrix(reduce_coin_matrix(state), tol);
}

double offdiagonal_mean(const ComplexMatrix &rho) {
    double sum = 0.0;
    int    count = 0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho.cols(); ++j) {
            if (i == j) continue;
            sum += rho(i, j).real();
            ++count;
        }
    }
    return count ? sum / count : 0.0;
}

CoinTrajectory run_experiment(const WalkConfig &cfg, const std::vector<std::string> &labels, const Tolerances &tol) {
    cfg.validate(tol);
    const ComplexMatrix g = grover_coin();

    CoinTrajectory             out;
    std::vector<ThermoContext> contexts;
    contexts.reserve(labels.size());
    for (const auto &label : labels) {
        Observable o = gell_mann_by_label(label);
        out.labels.push_back(o.label);
        contexts.push_back(ThermoContext::make(g, {std::move(o)}, tol));
    }

    out.records.reserve(static_cast<std::size_t>(cfg.steps) + 1);

    WalkState current = init_gaussian(cfg, tol);
    WalkState next(current.half_width());
    for (int t = 0; t <= cfg.steps; ++t) {
        DensityMatrix rho = reduce_coin(current, tol);
        TrajectoryRecord rec{t, rho, expectation(rho, g), vn_entropy(rho, tol), offdiagonal_mean(rho.matrix()), {}};
        rec.temperatures.reserve(contexts.size());
        for (const auto &ctx : contexts) {
            ObservableTemperature ot;
            try {
                ot.result = temperature_general(rho, ctx, tol);
            } catch (const Error &e) {
                if (e.code() != ErrorCode::SingularM) throw;
                ot.singular = true;
            }
            rec.temperatures.push_back(ot);
        }
        out.records.push_back(std::move(rec));
        if (t < cfg.steps) {
            step_into(current, next);
            std::swap(current, next);
        }
    }
    return out;
}

double estimate_x_infinity(const CoinTrajectory &trajectory, int window) {
    const auto &records = trajectory.records;
    if (window < 1 || records.size() < static_cast<std::size_t>(window)) {
        throw Error(ErrorCode::InvalidArgument, "trajectory shorter than the averaging window");
    }
    double sum = 0.0;
    for (auto it = records.end() - window; it != records.end(); ++it) sum += it->x_offdiag;
    return sum / window;
}

double x_from_beta(double beta) {
    if (std::isnan(beta)) throw Error(ErrorCode::NonFinite, "beta is NaN");
    // -2 sinh / (3 (3 cosh + sinh)) rewritten through tanh to survive large |beta|.
    const double t = std::tanh(beta);
    return -2.0 * t / (3.0 * (3.0 + t));
}

double equilibrium_beta_from_x(double x) {
    if (!(x > -1.0 / 6.0 && x < 1.0 / 3.0)) {
        throw Error(ErrorCode::OutOfPhysicalRange, "x = " + std::to_string(x) + " outside (-1/6, 1/3)");
    }
    return 0.5 * std::log((1.0 - 3.0 * x) / (1.0 + 6.0 * x));
}

double equilibrium_temperature_from_x(double x) {
    const double beta = equilibrium_beta_from_x(x);
    if (x == 0.0 || beta == 0.0) throw Error(ErrorCode::InfiniteT, "x = 0 is the maximally mixed state");
    return 1.0 / beta;
}

} // namespace qthermo
