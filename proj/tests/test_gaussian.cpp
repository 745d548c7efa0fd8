// test_gaussian.cpp — covariance evolution, stationary states and log
// negativity against closed-form and matrix-exponential oracles

#include "optoment/errors.hpp"
#include "optoment/gaussian.hpp"
#include "optoment/symplectic.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

using namespace optoment;

namespace {

const double log2e = std::numbers::log2e;

// σ(t) for constant A, D via the augmented exponential
// exp([[−A, D], [0, Aᵀ]] t) = [[·, F], [0, G]], σ(t) = Gᵀσ₀G + GᵀF.
Matrix6d exact_sigma(const Matrix6d& A, const Matrix6d& D, const Matrix6d& sigma0, double t) {
    Eigen::Matrix<double, 12, 12> big = Eigen::Matrix<double, 12, 12>::Zero();
    big.topLeftCorner<6, 6>() = -A;
    big.topRightCorner<6, 6>() = D;
    big.bottomRightCorner<6, 6>() = A.transpose();
    const Eigen::Matrix<double, 12, 12> E = (big * t).exp();
    const Matrix6d F = E.topRightCorner<6, 6>();
    const Matrix6d G = E.bottomRightCorner<6, 6>();
    return G.transpose() * sigma0 * G + G.transpose() * F;
}

// E_N from the spectrum of iΩσ^Γ, computed with a general eigensolver.
double oracle_log_negativity(const Matrix4d& sigma) {
    Matrix4d pt = sigma;
    for (int k = 0; k < 4; ++k) {
        pt(3, k) = -pt(3, k);
        pt(k, 3) = -pt(k, 3);
    }
    pt(3, 3) = sigma(3, 3);
    const Eigen::MatrixXd om = symplectic_form(2);
    Eigen::EigenSolver<Eigen::MatrixXd> es(om * pt);
    double nu = 1e300;
    for (int k = 0; k < 4; ++k) nu = std::min(nu, std::abs(es.eigenvalues()(k)));
    return std::max(0.0, -std::log2(2.0 * nu));
}

Matrix4d two_mode_squeezed(double r) {
    Matrix4d s = Matrix4d::Zero();
    const double c = 0.5 * std::cosh(2 * r), sh = 0.5 * std::sinh(2 * r);
    s.diagonal().setConstant(c);
    s(0, 2) = s(2, 0) = sh;
    s(1, 3) = s(3, 1) = -sh;
    return s;
}

InterfaceModel random_stable(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        const double g0 = 0.5 + 2.5 * u(rng);
        auto m = InterfaceModel::two_tone(g0, 1.2 * u(rng), g0 * (0.01 + 0.2 * u(rng)), g0 * (0.01 + 0.2 * u(rng)),
                                          g0 * 0.01 * u(rng), 100 * u(rng), 100 * u(rng));
        if (stability_check(m).stable) return m;
    }
}

}  // namespace

TEST_CASE("log negativity of reference states") {
    for (double r : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        CHECK(log_negativity(two_mode_squeezed(r)) == doctest::Approx(2 * r * log2e).epsilon(1e-12));
    }
    Matrix4d thermal = Matrix4d::Identity() * 3.5;
    CHECK(log_negativity(thermal) == 0.0);
    Matrix4d bad = Matrix4d::Identity() * 0.1;
    CHECK_THROWS_AS(log_negativity(bad), std::domain_error);
}

TEST_CASE("log negativity against the partial-transpose spectrum") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        // S S^T/2 · thermal is physical for any symplectic S; build S from a
        // random two-mode Hamiltonian.
        Eigen::Matrix4d H;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) H(i, j) = n(rng);
        H = 0.5 * (H + H.transpose()).eval();
        const Eigen::MatrixXd om = symplectic_form(2);
        const Matrix4d S = (Eigen::MatrixXd(om * H) * 0.4).exp();
        Matrix4d base = Matrix4d::Identity() * 0.5;
        base(0, 0) = base(1, 1) = 0.5 + std::abs(n(rng));
        const Matrix4d sigma = S * base * S.transpose();
        CHECK(log_negativity(sigma) == doctest::Approx(oracle_log_negativity(sigma)).epsilon(1e-9));
    }
}

TEST_CASE("constant scheme at the interference times") {
    const double g0 = 3.0, r = 1.0;
    const auto m = InterfaceModel::two_tone(g0, r, 0, 0, 0);
    const auto sched = CouplingSchedule::constant(m.g1, m.g2, 2 * std::numbers::pi / g0);
    const std::vector<double> grid{0.0, interference_time(g0, 1), interference_time(g0, 2)};
    const auto states = evolve(initial_state(m), m, sched, grid);
    const Matrix4d S1 = analytic_transfer_constant(r, 1);
    const Matrix4d expected = 0.5 * S1 * S1.transpose();
    CHECK((states[1].cavity_block() - expected).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(log_negativity(states[1]) == doctest::Approx(4 * r * log2e).epsilon(1e-9));
    CHECK((states[2].sigma - states[0].sigma).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("evolve matches the augmented matrix exponential") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random_stable(rng);
        const auto sched = CouplingSchedule::constant(m.g1, m.g2, 4.0);
        const auto states = evolve(initial_state(m), m, sched, {0.0, 1.3, 4.0});
        const auto dm = dynamics_matrix(m);
        for (int k : {1, 2}) {
            const Matrix6d want = exact_sigma(dm.A, dm.D, states[0].sigma, states[k].t);
            const double scale = want.cwiseAbs().maxCoeff();
            CHECK((states[k].sigma - want).cwiseAbs().maxCoeff() < 1e-7 * scale);
        }
    }
}

TEST_CASE("analytic transfers are symplectic") {
    const Eigen::MatrixXd om = symplectic_form(2);
    for (int n = 1; n <= 4; ++n) {
        for (double r : {0.2, 1.0}) {
            const Matrix4d a = analytic_transfer_constant(r, n);
            const Matrix4d b = analytic_transfer_adiabatic(r, n);
            CHECK((a * om * a.transpose() - om).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((b * om * b.transpose() - om).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(log_negativity(Matrix4d(0.5 * b * b.transpose())) == doctest::Approx(2 * r * log2e).epsilon(1e-10));
        }
    }
    CHECK(analytic_transfer_constant(1.0, 2).isIdentity());
}

TEST_CASE("adiabatic scheme approaches the two-mode squeezed state") {
    const double g0 = 1.0;
    const int n = 8;
    const double lambda = 0.02 * g0;
    const double t_n = interference_time(g0, n);
    const auto m = InterfaceModel::two_tone(g0, 0.0, 0, 0, 0);
    const auto sched = CouplingSchedule::adiabatic_squeeze(g0, lambda, t_n);
    const auto states = evolve(initial_state(m), m, sched, {0.0, t_n});
    const double r = lambda * t_n;
    const Matrix4d S = analytic_transfer_adiabatic(r, n);
    const Matrix4d ideal = 0.5 * S * S.transpose();
    CHECK(std::abs(log_negativity(states[1]) - 2 * r * log2e) < 0.05);
    CHECK((states[1].cavity_block() - ideal).cwiseAbs().maxCoeff() < 0.1 * ideal.cwiseAbs().maxCoeff());
}

TEST_CASE("stationary covariance solves the Lyapunov equation") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_stable(rng);
        const auto st = stationary_covariance(m);
        const auto dm = dynamics_matrix(m);
        const Matrix6d res = dm.A * st.sigma + st.sigma * dm.A.transpose() + dm.D;
        CHECK(res.cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, st.sigma.cwiseAbs().maxCoeff()));
        CHECK(st.is_physical());
    }
}

TEST_CASE("long evolution relaxes to the stationary state") {
    const auto m = InterfaceModel::two_tone(1.0, 0.3, 0.5, 0.4, 0.3, 2.0, 0.0);
    const auto sched = CouplingSchedule::constant(m.g1, m.g2, 200.0);
    const auto states = evolve(initial_state(m), m, sched, {0.0, 200.0});
    const auto st = stationary_covariance(m);
    CHECK((states[1].sigma - st.sigma).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("random damped evolutions stay physical") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_stable(rng);
        const double g0 = m.g0();
        const auto sched = CouplingSchedule::constant(m.g1, m.g2, 3 * std::numbers::pi / g0);
        const auto states = evolve(initial_state(m), m, sched, linear_grid(sched.t_final(), 7));
        for (const auto& s : states) {
            CHECK(s.is_physical());
            CHECK(log_negativity(s) >= 0.0);
        }
    }
}

TEST_CASE("failure modes") {
    const auto unstable = InterfaceModel::two_tone(1.0, 0.5, 0.1, 0.1, 0.01).with_couplings(1.0, 2.0);
    CHECK_THROWS_AS(stationary_covariance(unstable), UnstableModelError);
    EvolveOptions opts;
    opts.overflow_guard = 1e6;
    const auto sched = CouplingSchedule::constant(1.0, 2.0, 100.0);
    CHECK_THROWS_AS(evolve(initial_state(unstable), unstable, sched, {0.0, 100.0}, opts), DivergenceError);

    const auto m = InterfaceModel::two_tone(1.0, 0.5, 0.1, 0.1, 0.01);
    const auto ok = CouplingSchedule::constant(m.g1, m.g2, 1.0);
    CHECK_THROWS_AS(evolve(initial_state(m), m, ok, {}), std::invalid_argument);
    CHECK_THROWS_AS(evolve(initial_state(m), m, ok, {0.0, 0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(evolve(initial_state(m), m, CouplingSchedule::resonant_swap(1.0, 1), {0.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(initial_state(m).pair_block(1, 1), std::invalid_argument);
}

TEST_CASE("grids and initial state") {
    const auto g = linear_grid(2.0, 5);
    CHECK(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
    CHECK(g[2] == doctest::Approx(1.0));
    CHECK_THROWS_AS(linear_grid(1.0, 1), std::invalid_argument);
    CHECK(default_time_grid(3.0).size() == 2000);
    CHECK(default_time_grid(3.0).back() == doctest::Approx(std::numbers::pi));
    CHECK(interference_time(3.0, 2) == doctest::Approx(2 * std::numbers::pi / 3));

    auto m = InterfaceModel::two_tone(1.0, 0.5, 0.1, 0.1, 0.01, 0.0, 7.0);
    const auto s0 = initial_state(m);
    CHECK(s0.sigma(2, 2) == doctest::Approx(7.5));
    CHECK(s0.sigma(0, 0) == doctest::Approx(0.5));
    CHECK(log_negativity(s0) == 0.0);
}
