#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "qthermo/qwalk.hpp"
#include "qthermo/thermometry.hpp"
#include "test_support.hpp"

using namespace qthermo;
using qthermo::testing::relative_error;
using qthermo::testing::Rng;

namespace {

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

ComplexMatrix walk_template(double x) {
    ComplexMatrix m = ComplexMatrix::Constant(3, 3, Complex(x, 0.0));
    m.diagonal().setConstant(Complex(1.0 / 3.0, 0.0));
    return m;
}

Observable gm(int k) { return gell_mann(3)[static_cast<std::size_t>(k - 1)]; }

// Reduced coin state of the default walk after `steps` steps.
DensityMatrix walk_state(int steps) {
    WalkState s = init_gaussian(WalkConfig::defaults());
    for (int t = 0; t < steps; ++t) s = step(s);
    return reduce_coin(s);
}

} // namespace

TEST_CASE("build_m structure") {
    SUBCASE("qubit without observables") {
        const auto rho = qubit_from_bloch({0.1, 0.2, 0.3});
        const auto ctx = ThermoContext::make(two_level_hamiltonian(1.0));
        const auto mm  = build_m(rho, ctx);
        REQUIRE(mm.m.rows() == 2);
        const auto basis = natural_basis(rho, ctx);
        for (Eigen::Index j = 0; j < 2; ++j) {
            const Complex hjj = basis.eigenvectors.col(j).dot(ctx.hamiltonian * basis.eigenvectors.col(j));
            CHECK(mm.m(0, j) == doctest::Approx(hjj.real()).epsilon(1e-14));
            CHECK(mm.m(1, j) == 1.0);
        }
    }
    SUBCASE("thermal qutrit under G with O1 has energy row (-1, -1, 1) up to order") {
        const auto ctx = ThermoContext::make(grover_coin(), {gm(1)});
        const auto mm  = build_m(thermal_state(grover_coin(), 0.5), ctx);
        RealVector row = mm.m.row(0);
        std::sort(row.data(), row.data() + 3);
        CHECK(row(0) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(row(1) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(row(2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mm.m.row(2) == RealVector::Ones(3).transpose());
    }
    SUBCASE("O2 on walk states gives a zero row") {
        const auto ctx = ThermoContext::make(grover_coin(), {gm(2)});
        for (int steps : {0, 7, 120}) {
            const auto mm = build_m(walk_state(steps), ctx);
            CHECK(mm.m.row(1).cwiseAbs().maxCoeff() < 1e-15);
            CHECK(std::abs(mm.det) < 1e-15);
            CHECK(code_of([&] { require_nonsingular(mm); }) == ErrorCode::SingularM);
        }
    }
    SUBCASE("dimension mismatch") {
        const auto ctx = ThermoContext::make(two_level_hamiltonian(1.0));
        CHECK(code_of([&] { (void)build_m(thermal_state(grover_coin(), 0.5), ctx); }) == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("ThermoContext validation") {
    CHECK(code_of([] { (void)ThermoContext::make(grover_coin()); }) == ErrorCode::WrongDimension);
    ComplexMatrix bad = grover_coin();
    bad(0, 1) += Complex(0.0, 0.5);
    CHECK(code_of([&] { (void)ThermoContext::make(bad, {gm(1)}); }) == ErrorCode::NotHermitian);
}

TEST_CASE("populations_from_constraints") {
    SUBCASE("qubit reduces to lambda_1 = (E - H22)/(H11 - H22)") {
        const auto rho   = qubit_from_bloch({0.3, -0.1, 0.4});
        const auto ctx   = ThermoContext::make(two_level_hamiltonian(0.7));
        const auto mm    = build_m(rho, ctx);
        const auto gamma = constraint_vector(rho, ctx);
        const auto pop   = populations_from_constraints(mm, gamma);
        CHECK(pop.values()(0) == doctest::Approx((gamma(0) - mm.m(0, 1)) / (mm.m(0, 0) - mm.m(0, 1))).epsilon(1e-12));
    }
    SUBCASE("maximally mixed") {
        const auto rho = density_from_matrix(ComplexMatrix::Identity(3, 3) / 3.0);
        const auto ctx = ThermoContext::make(grover_coin(), {gm(4)});
        const auto pop = populations_from_constraints(build_m(rho, ctx), constraint_vector(rho, ctx));
        CHECK((pop.values().array() - 1.0 / 3.0).abs().maxCoeff() < 1e-12);
    }
    SUBCASE("matches the eigenvalues of rho on random states") {
        Rng rng(31);
        for (int trial = 0; trial < 300; ++trial) {
            const auto n   = static_cast<Eigen::Index>(2 + trial % 4);
            const auto rho = density_from_matrix(qthermo::testing::random_density_matrix(n, rng));
            const auto ctx = ThermoContext::make(qthermo::testing::random_hermitian(n, rng),
                                                 qthermo::testing::random_observables(n, rng));
            const auto pop = populations_from_constraints(build_m(rho, ctx), constraint_vector(rho, ctx));
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
            RealVector expected = es.eigenvalues().reverse();
            CHECK((pop.values() - expected).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SUBCASE("thermal qutrit context reproduces thermal populations") {
        Rng rng(32);
        const ComplexMatrix h   = qthermo::testing::random_hermitian(3, rng);
        const auto          rho = thermal_state(h, 0.9);
        const auto          ctx = ThermoContext::make(h, qthermo::testing::random_observables(3, rng));
        const auto          pop = populations_from_constraints(build_m(rho, ctx), constraint_vector(rho, ctx));
        CHECK((pop.values() - eig_hermitian(rho.matrix()).eigenvalues).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("M-matrix column and duality identities") {
    Rng rng(33);
    for (int trial = 0; trial < 500; ++trial) {
        const auto n   = static_cast<Eigen::Index>(2 + trial % 4);
        const auto rho = density_from_matrix(qthermo::testing::random_density_matrix(n, rng));
        const auto ctx = ThermoContext::make(qthermo::testing::random_hermitian(n, rng),
                                             qthermo::testing::random_observables(n, rng));
        const auto mm  = build_m(rho, ctx);
        const RealMatrix inv = invert(mm.m);
        CHECK(std::abs(inv.col(0).sum()) < 1e-9);
        CHECK(std::abs(mm.m.row(0).dot(inv.col(0)) - 1.0) < 1e-9);
    }
}

TEST_CASE("temperature_general: equilibrium recovery and observable independence") {
    Rng rng(34);
    for (int trial = 0; trial < 60; ++trial) {
        const auto          n    = static_cast<Eigen::Index>(2 + trial % 4);
        const ComplexMatrix h    = qthermo::testing::random_unit_hamiltonian(n, rng);
        const double        beta = 0.1 + 4.9 * (trial / 59.0);
        const auto          rho  = thermal_state(h, beta);
        std::vector<double> temps;
        for (int set = 0; set < 5; ++set) {
            const auto r = temperature_general(rho, ThermoContext::make(h, qthermo::testing::random_observables(n, rng)));
            REQUIRE(r.is_finite());
            CHECK(relative_error(r.value, 1.0 / beta) < 1e-8);
            temps.push_back(r.value);
        }
        for (double t : temps) CHECK(std::abs(t - temps.front()) < 1e-8 * std::abs(temps.front()));
    }
}

TEST_CASE("temperature_general: finite-difference oracle") {
    Rng rng(35);
    for (int trial = 0; trial < 100; ++trial) {
        const auto          n   = static_cast<Eigen::Index>(2 + trial % 4);
        const ComplexMatrix rho = qthermo::testing::random_density_matrix(n, rng);
        const ComplexMatrix h   = qthermo::testing::random_hermitian(n, rng);
        const auto          obs = qthermo::testing::random_observables(n, rng);
        std::vector<ComplexMatrix> mats;
        for (const auto &o : obs) mats.push_back(o.matrix);
        const auto r = temperature_general(density_from_matrix(rho), ThermoContext::make(h, obs));
        REQUIRE(r.is_finite());
        CHECK(relative_error(r.value, qthermo::testing::finite_difference_temperature(rho, h, mats)) < 1e-4);
    }
}

TEST_CASE("temperature_general: walk template and limits") {
    const auto ctx = ThermoContext::make(grover_coin(), {gm(1)});
    const auto r   = temperature_general(density_from_matrix(walk_template(-0.1112)), ctx);
    REQUIRE(r.is_finite());
    CHECK(std::abs(r.value - 1.4418) < 2e-3);
    CHECK(r.value == doctest::Approx(equilibrium_temperature_from_x(-0.1112)).epsilon(1e-9));
    CHECK(r.diagnostics.degenerate_subspace);

    ComplexVector psi(3);
    psi << 0.6, Complex(0.0, 0.48), 0.64;
    const auto pure = temperature_general(density_from_matrix(psi * psi.adjoint()), ctx);
    CHECK(pure.kind == TemperatureKind::zero_pure_limit);
    CHECK(pure.value == 0.0);

    const auto mixed = temperature_general(density_from_matrix(ComplexMatrix::Identity(3, 3) / 3.0),
                                           ThermoContext::make(grover_coin(), {gm(4)}));
    CHECK(mixed.kind == TemperatureKind::infinite_mixed_limit);
    CHECK(std::isinf(mixed.value));

    const auto half = temperature_general(qubit_from_bloch({0, 0, 0}), ThermoContext::make(two_level_hamiltonian(1.0)));
    CHECK(half.kind == TemperatureKind::infinite_mixed_limit);
}

TEST_CASE("temperature_qubit") {
    const ComplexMatrix h = two_level_hamiltonian(1.0);
    const auto thermal    = temperature_qubit(thermal_state(h, 1.0), h);
    CHECK(thermal.value == doctest::Approx(1.0).epsilon(1e-12));

    // central difference of S(E) at fixed Bloch direction, step 1e-5: 1.8204784532537
    CHECK(temperature_qubit(qubit_from_bloch({0, 0, 0.5}), h).value == doctest::Approx(1.820478453).epsilon(1e-8));
    CHECK(temperature_qubit(qubit_from_bloch({0, 0, -0.5}), h).value == doctest::Approx(-1.820478453).epsilon(1e-8));

    CHECK(temperature_qubit(qubit_from_bloch({0, 0, 1}), h).kind == TemperatureKind::zero_pure_limit);
    CHECK(temperature_qubit(qubit_from_bloch({0, 0, 0}), h).kind == TemperatureKind::infinite_mixed_limit);

    const auto equator = temperature_qubit(qubit_from_bloch({0.5, 0, 0}), h);
    CHECK(equator.is_finite());
    CHECK(equator.value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("qubit formulas agree and carry the sign of w") {
    Rng rng(36);
    const double eps = 1.3;
    const ComplexMatrix h = two_level_hamiltonian(eps);
    for (int trial = 0; trial < 1000; ++trial) {
        const BlochVector b = qthermo::testing::random_bloch(rng);
        const auto a = temperature_qubit(qubit_from_bloch(b), h);
        const auto c = temperature_qubit_bloch(b, eps);
        REQUIRE(a.kind == c.kind);
        if (!a.is_finite()) continue;
        CHECK(std::abs(a.value - c.value) < 1e-10 * std::max(1.0, std::abs(c.value)));
        CHECK((c.value > 0) == (b.w > 0));
        const auto g = temperature_general(qubit_from_bloch(b), ThermoContext::make(h));
        CHECK(std::abs(g.value - c.value) < 1e-9 * std::max(1.0, std::abs(c.value)));
    }
    const BlochVector example{0.6, 0.0, 0.377};
    CHECK(std::abs(temperature_qubit(qubit_from_bloch(example), two_level_hamiltonian(1.0)).value -
                   temperature_qubit_bloch(example, 1.0).value) < 1e-10);
}

TEST_CASE("temperature_qubit_bloch and legacy limits") {
    CHECK(temperature_qubit_bloch({0, 0, 0}, 1.0).kind == TemperatureKind::infinite_mixed_limit);
    CHECK(temperature_qubit_bloch({0.6, 0.0, 0.8}, 1.0).kind == TemperatureKind::zero_pure_limit);
    CHECK(temperature_qubit_bloch({0.5, 0.0, 0.0}, 1.0).value == 0.0);
    for (double beta : {0.2, 1.0, 3.0}) {
        const BlochVector thermal{0, 0, std::tanh(beta)};
        CHECK(temperature_qubit_legacy(thermal, 1.0).value == doctest::Approx(1.0 / beta).epsilon(1e-12));
        CHECK(temperature_qubit_bloch(thermal, 1.0).value == doctest::Approx(1.0 / beta).epsilon(1e-12));
    }
    CHECK(code_of([] { (void)temperature_qubit_legacy({0.5, 0, 0}, 1.0); }) == ErrorCode::ZeroW);
    CHECK(code_of([] { (void)temperature_qubit_bloch({1.0, 1.0, 0}, 1.0); }) == ErrorCode::BlochOutOfBall);
}

TEST_CASE("temperature_qutrit") {
    const ComplexMatrix g = grover_coin();
    CHECK(temperature_qutrit(thermal_state(g, 0.7), g, gm(1).matrix).value ==
          doctest::Approx(1.0 / 0.7).epsilon(1e-8));

    Rng rng(37);
    for (int trial = 0; trial < 300; ++trial) {
        const auto          rho = density_from_matrix(qthermo::testing::random_density_matrix(3, rng));
        const ComplexMatrix h   = qthermo::testing::random_hermitian(3, rng);
        const ComplexMatrix o   = qthermo::testing::random_hermitian(3, rng);
        const auto closed  = temperature_qutrit(rho, h, o);
        const auto general = temperature_general(rho, ThermoContext::make(h, {{"O", o}}));
        CHECK(std::abs(closed.value - general.value) < 1e-9 * std::max(1.0, std::abs(general.value)));

        const auto ctx = ThermoContext::make(h, {{"O", o}});
        const auto mm  = build_m(rho, ctx);
        const auto cf  = qutrit_closed_form(mm, expectation(rho, h), expectation(rho, o));
        CHECK(cf.det == doctest::Approx(mm.det).epsilon(1e-9));
        CHECK((cf.first_column - invert(mm.m).col(0)).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((cf.populations - eig_hermitian(rho.matrix()).eigenvalues).cwiseAbs().maxCoeff() < 1e-9);
    }

    CHECK(code_of([&] { (void)temperature_qutrit(walk_state(120), g, gm(2).matrix); }) ==
          ErrorCode::SingularM);
    CHECK(code_of([&] { (void)temperature_qutrit(qubit_from_bloch({0, 0, 0.2}), g, gm(1).matrix); }) ==
          ErrorCode::WrongDimension);
}

TEST_CASE("temperature_spectral") {
    SUBCASE("two levels reduce to (E2 - E1)/ln(P1/P2)") {
        const auto p = Populations::from_values(Eigen::Vector2d(0.7, 0.3));
        CHECK(temperature_spectral(p, Eigen::Vector2d(-0.4, 1.1)) ==
              doctest::Approx(1.5 / std::log(0.7 / 0.3)).epsilon(1e-14));
    }
    SUBCASE("thermal populations give 1/beta") {
        Rng rng(38);
        for (int trial = 0; trial < 100; ++trial) {
            const auto          n    = static_cast<Eigen::Index>(2 + trial % 5);
            const ComplexMatrix h    = qthermo::testing::random_unit_hamiltonian(n, rng);
            const double        beta = 0.2 + 0.04 * trial;
            CHECK(relative_error(temperature_spectral(thermal_state(h, beta), h), 1.0 / beta) < 1e-8);
        }
    }
    SUBCASE("pure non-eigenstate: tau finite while T is the pure limit") {
        const ComplexMatrix h   = two_level_hamiltonian(1.0);
        const auto          rho = qubit_from_bloch({0.6, 0.0, 0.8});
        const double        tau = temperature_spectral(rho, h);
        CHECK(std::isfinite(tau));
        CHECK(tau == doctest::Approx(2.0 / std::log(9.0)).epsilon(1e-12));
        CHECK(temperature_general(rho, ThermoContext::make(h)).kind == TemperatureKind::zero_pure_limit);
    }
    SUBCASE("errors") {
        CHECK(code_of([] {
                  (void)temperature_spectral(qubit_from_bloch({0, 0, 0.3}), ComplexMatrix(ComplexMatrix::Identity(2, 2)));
              }) == ErrorCode::DegenerateSpectrum);
        CHECK(code_of([] {
                  (void)temperature_spectral(Populations::from_values(Eigen::Vector2d(1.0, 0.0)), Eigen::Vector2d(0, 1));
              }) == ErrorCode::ZeroPopulation);
        CHECK(code_of([] {
                  (void)temperature_spectral(Populations::from_values(Eigen::Vector2d(0.5, 0.5)), Eigen::Vector2d(1, 0));
              }) == ErrorCode::DegenerateSpectrum);
    }
}

TEST_CASE("heat_capacity") {
    CHECK(heat_capacity(1.0, std::numbers::pi / 2, 1.0).value == doctest::Approx(0.0).epsilon(1e-30));
    // numerical dE/dT with E = -eps cos(theta) tanh(eps cos(theta)/T), step 1e-5: 0.41997434160
    CHECK(std::abs(heat_capacity(1.0, 0.0, 1.0).value - 0.41997434160) < 1e-9);
    // theta = 0 is the classical two-level Schottky form
    for (double t : {0.3, 1.0, 4.0}) {
        const double x = 1.0 / t;
        CHECK(heat_capacity(1.0, 0.0, t).value == doctest::Approx(x * x / std::pow(std::cosh(x), 2)).epsilon(1e-13));
    }
    const auto zero = heat_capacity(1.0, 0.3, 0.0);
    CHECK(zero.zero_temperature_limit);
    CHECK(zero.value == 0.0);
    CHECK(heat_capacity(1.0, 0.0, 1e-3).value >= 0.0);
    CHECK(std::isfinite(heat_capacity(1.0, 0.0, 1e-4).value));
    CHECK(heat_capacity(1.0, 0.0, -1.5).value > 0.0);
}

TEST_CASE("isotherm_samples") {
    const auto north = isotherm_samples(0.5, 1.0, 400);
    REQUIRE(!north.empty());
    for (const auto &p : north) {
        CHECK(p.theta < std::numbers::pi / 2);
        const BlochVector b{p.modulus * std::sin(p.theta), 0.0, p.modulus * std::cos(p.theta)};
        CHECK(std::abs(temperature_qubit_bloch(b, 1.0).value - 0.5) < 1e-9);
    }
    const auto south = isotherm_samples(-2.0, 1.0, 400);
    REQUIRE(!south.empty());
    for (const auto &p : south) CHECK(p.theta > std::numbers::pi / 2);

    // small T pushes points toward the equator at fixed B
    const auto cold = isotherm_samples(0.01, 1.0, 50);
    for (const auto &p : cold)
        if (p.modulus < 0.9) CHECK(std::abs(p.theta - std::numbers::pi / 2) < 0.05);

    CHECK(code_of([] { (void)isotherm_samples(0.0, 1.0, 10); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { (void)isotherm_samples(1.0, 1.0, 1); }) == ErrorCode::InvalidArgument);
}
