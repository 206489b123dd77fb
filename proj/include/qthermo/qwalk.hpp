#pragma once

// Three-state discrete-time quantum walk on the line (Grover coin) and the
// coin thermalization experiment.

#include <array>
#include <string>
#include <vector>

#include "qthermo/thermometry.hpp"

namespace qthermo {

/// Chirality components in storage order.
enum Chirality : int { kRight = 0, kStay = 1, kLeft = 2 };

struct WalkConfig {
    double  sigma = 10.0;           // Gaussian width in sites
    Complex a0{-0.192743, 0.0};     // R amplitude
    Complex b0{0.962133, 0.0};      // N amplitude
    Complex c0{-0.192743, 0.0};     // L amplitude
    int     steps              = 400;
    int     lattice_half_width = 460; // sites n in [-L, L]

    /// Default experiment: sigma = 10, 400 steps, a0 = c0 = -0.192743 and b0
    /// fixed by normalization. This initial coin state relaxes to x ~ -0.1112.
    static WalkConfig defaults();
    /// Smallest admissible half width, steps + ceil(6 sigma).
    [[nodiscard]] int minimum_half_width() const;
    /// Throws InvalidArgument, NonFinite or LatticeTooSmall.
    void validate(const Tolerances &tol = default_tolerances()) const;
};

/// Amplitudes over sites n = -L..L, three chirality components per site.
class WalkState {
  public:
    using Site = std::array<Complex, 3>;

    WalkState() = default;
    explicit WalkState(int half_width) : half_width_(half_width), sites_(2 * static_cast<std::size_t>(half_width) + 1) {}

    [[nodiscard]] int half_width() const noexcept { return half_width_; }
    [[nodiscard]] std::size_t size() const noexcept { return sites_.size(); }
    [[nodiscard]] Site &site(int n) { return sites_[static_cast<std::size_t>(n + half_width_)]; }
    [[nodiscard]] const Site &site(int n) const { return sites_[static_cast<std::size_t>(n + half_width_)]; }
    [[nodiscard]] std::vector<Site> &sites() noexcept { return sites_; }
    [[nodiscard]] const std::vector<Site> &sites() const noexcept { return sites_; }

    [[nodiscard]] double norm_squared() const;
    /// Probability of finding the walker at site n.
    [[nodiscard]] double probability(int n) const;

  private:
    int               half_width_ = 0;
    std::vector<Site> sites_;
};

/// G = (2/3) J - I, the 3x3 Grover coin.
[[nodiscard]] ComplexMatrix grover_coin();

/// a_n = c_n = g_n a0, b_n = g_n b0 with g_n = exp(-n^2 / 4 sigma^2) / (2 pi sigma^2)^{1/4}.
/// The Gaussian is truncated to |n| <= L - steps so the walker never reaches
/// the lattice edge within cfg.steps, then renormalized to unit norm.
[[nodiscard]] WalkState init_gaussian(const WalkConfig &cfg, const Tolerances &tol = default_tolerances());

/// One application of U = T (I (x) G): coin on every site, then R moves to
/// n+1, L to n-1, N stays. Throws BoundaryOverflow if the outermost sites
/// carry amplitude. OpenMP-parallel over sites; each output site is written by
/// exactly one iteration, so the result is bit-identical to step_serial.
[[nodiscard]] WalkState step(const WalkState &state);
void step_into(const WalkState &in, WalkState &out);

/// Sequential reference for step().
[[nodiscard]] WalkState step_serial(const WalkState &state);
void step_serial_into(const WalkState &in, WalkState &out);

/// rho_ij = sum_n psi_ni conj(psi_nj). Sites are summed in fixed blocks
/// (parallel across blocks, blocks combined in order), so the result does not
/// depend on the thread count.
[[nodiscard]] ComplexMatrix reduce_coin_matrix(const WalkState &state);
/// Plain sequential sum over sites.
[[nodiscard]] ComplexMatrix reduce_coin_matrix_serial(const WalkState &state);
[[nodiscard]] DensityMatrix reduce_coin(const WalkState &state, const Tolerances &tol = default_tolerances());

/// Mean real part of the six off-diagonal entries.
[[nodiscard]] double offdiagonal_mean(const ComplexMatrix &rho);

struct ObservableTemperature {
    bool              singular = false; // SingularM: the observable cannot fix the state
    TemperatureResult result;
};

struct TrajectoryRecord {
    int           t;
    DensityMatrix rho;
    double        energy;
    double        entropy;
    double        x_offdiag;
    std::vector<ObservableTemperature> temperatures; // aligned with CoinTrajectory::labels
};

struct CoinTrajectory {
    std::vector<std::string>      labels;
    std::vector<TrajectoryRecord> records;
};

/// Runs the walk for cfg.steps steps, recording the reduced coin state and the
/// temperature with context (G, O_label) for each requested Gell-Mann label.
[[nodiscard]] CoinTrajectory run_experiment(const WalkConfig &cfg, const std::vector<std::string> &labels,
                                            const Tolerances &tol = default_tolerances());

/// Average of the six off-diagonal entries over the last `window` records.
[[nodiscard]] double estimate_x_infinity(const CoinTrajectory &trajectory, int window = 50);

/// Off-diagonal entry of exp(-beta G)/Z: x = -2 sinh b / (3 (3 cosh b + sinh b)).
[[nodiscard]] double x_from_beta(double beta);
/// beta = 1/2 ln((1 - 3x) / (1 + 6x)); throws OutOfPhysicalRange outside (-1/6, 1/3).
[[nodiscard]] double equilibrium_beta_from_x(double x);
/// 1 / equilibrium_beta_from_x(x); throws InfiniteT at x = 0.
[[nodiscard]] double equilibrium_temperature_from_x(double x);

} // namespace qthermo
