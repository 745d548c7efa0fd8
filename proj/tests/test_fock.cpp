// test_fock.cpp — truncated Fock space, sector-block Lindblad evolution and
// the discrete swap, checked against dense matrix-exponential oracles

#include "optoment/errors.hpp"
#include "optoment/fock.hpp"
#include "optoment/gaussian.hpp"

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace optoment;

namespace {

using cd = std::complex<double>;
using Eigen::MatrixXcd;

// Annihilation operator for `mode`, built from the basis ordering alone.
MatrixXcd dense_lowering(const FockSpace& space, int mode) {
    const long D = space.dimension();
    MatrixXcd a = MatrixXcd::Zero(D, D);
    for (long i = 0; i < D; ++i) {
        auto n = space.occupations(i);
        if (n[mode] == 0) continue;
        const double amp = std::sqrt(double(n[mode]));
        --n[mode];
        a(space.index(n[0], n[1], n[2]), i) = amp;
    }
    return a;
}

// Row-major vectorization: vec(AρB) = (A ⊗ Bᵀ) vec(ρ).
MatrixXcd dense_liouvillian(const FockSpace& space, const InterfaceModel& m) {
    const long D = space.dimension();
    const MatrixXcd a1 = dense_lowering(space, 0), b = dense_lowering(space, 1), a2 = dense_lowering(space, 2);
    MatrixXcd H = m.g1 * (a1.adjoint() * b + b.adjoint() * a1);
    if (m.variant == Variant::TwoToneSqueezing) {
        H += cd(0, m.g2) * (a2.adjoint() * b.adjoint() - a2 * b);
    } else {
        H += m.g2 * (a2.adjoint() * b + b.adjoint() * a2);
    }
    const MatrixXcd Id = MatrixXcd::Identity(D, D);
    MatrixXcd L = cd(0, -1) * (Eigen::kroneckerProduct(H, Id) - Eigen::kroneckerProduct(Id, H.transpose())).eval();
    auto dissipator = [&](const MatrixXcd& J, double rate) {
        if (rate == 0.0) return;
        const MatrixXcd JdJ = J.adjoint() * J;
        L += rate * (Eigen::kroneckerProduct(J, J.conjugate()).eval() - 0.5 * Eigen::kroneckerProduct(JdJ, Id).eval() -
                     0.5 * Eigen::kroneckerProduct(Id, JdJ.transpose()).eval());
    };
    dissipator(a1, m.kappa1);
    dissipator(a2, m.kappa2);
    dissipator(b, m.gamma_m * (m.n_th + 1.0));
    dissipator(b.adjoint(), m.gamma_m * m.n_th);
    return L;
}

MatrixXcd dense_evolve(const MatrixXcd& L, const MatrixXcd& rho0, double t) {
    const long D = rho0.rows();
    Eigen::VectorXcd v(D * D);
    for (long i = 0; i < D; ++i)
        for (long j = 0; j < D; ++j) v(i * D + j) = rho0(i, j);
    const Eigen::VectorXcd w = (L * t).exp() * v;
    MatrixXcd out(D, D);
    for (long i = 0; i < D; ++i)
        for (long j = 0; j < D; ++j) out(i, j) = w(i * D + j);
    return out;
}

}  // namespace

TEST_CASE("Fock space layout and sectors") {
    FockConfig cfg;
    cfg.dims = {3, 4, 2};
    FockSpace space(cfg, Variant::TwoToneSqueezing);
    CHECK(space.dimension() == 24);
    long covered = 0;
    for (std::size_t s = 0; s < space.sector_count(); ++s) {
        for (long g : space.sector_states(s)) {
            CHECK(space.charge_of(g) == space.sector_charge(s));
            const auto n = space.occupations(g);
            CHECK(space.index(n[0], n[1], n[2]) == g);
            CHECK(space.locate(g).first == s);
            ++covered;
        }
    }
    CHECK(covered == 24);
    const auto n = space.occupations(space.index(2, 3, 1));
    CHECK(space.charge_of(space.index(2, 3, 1)) == 2 + 3 - 1);
    CHECK(n == std::array<int, 3>{2, 3, 1});
    for (int mode = 0; mode < 3; ++mode) {
        CHECK((MatrixXcd(space.annihilation(mode)) - dense_lowering(space, mode)).cwiseAbs().maxCoeff() == 0.0);
    }
    FockSpace db(cfg, Variant::DoubleBeamsplitter);
    CHECK(db.charge_of(db.index(2, 3, 1)) == 6);
    CHECK_THROWS_AS(space.index(3, 0, 0), std::out_of_range);
}

TEST_CASE("config validation and sizing") {
    FockConfig cfg;
    cfg.dims = {0, 3, 3};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dims = {30, 30, 30};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    const auto sized = FockConfig::for_occupations({0.0, 1.0, 0.3}, 1e-4);
    CHECK(sized.dims[0] == 3);
    for (int k : {1, 2}) {
        const double n = k == 1 ? 1.0 : 0.3;
        auto top = [&](int d) { return std::pow(n / (n + 1), d - 1) / (n + 1); };
        CHECK(top(sized.dims[k]) < 1e-4);
        CHECK(top(sized.dims[k] - 1) >= 1e-4);
    }
}

TEST_CASE("initial and reference states") {
    FockConfig cfg;
    cfg.dims = {3, 6, 3};
    auto m = InterfaceModel::two_tone(1.0, 0.3, 0.1, 0.1, 0.01, 0.0, 0.5);
    const auto s = FockState::initial(cfg, m);
    CHECK(s.trace() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.is_physical());
    const MatrixXcd rho = s.dense();
    double z = 0.0;
    for (int k = 0; k < 6; ++k) z += std::pow(0.5 / 1.5, k) / 1.5;
    for (int k = 0; k < 6; ++k) {
        const long i = s.space->index(0, k, 0);
        CHECK(rho(i, i).real() == doctest::Approx(std::pow(0.5 / 1.5, k) / 1.5 / z).epsilon(1e-12));
    }

    const auto p = FockState::single_photon(cfg, m, 2);
    CHECK(p.expectation(p.space->annihilation(2).adjoint() * p.space->annihilation(2)).real() ==
          doctest::Approx(1.0));

    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(cfg.dimension());
    const FockSpace sp(cfg, Variant::DoubleBeamsplitter);
    ket(sp.index(1, 0, 0)) = 1.0;
    ket(sp.index(0, 0, 0)) = 1.0;
    CHECK_THROWS_AS(FockState::from_ket(cfg, Variant::DoubleBeamsplitter, ket), std::invalid_argument);
}

TEST_CASE("sector evolution matches the dense Liouvillian") {
    FockConfig cfg;
    cfg.dims = {3, 3, 3};
    for (Variant v : {Variant::TwoToneSqueezing, Variant::DoubleBeamsplitter}) {
        InterfaceModel m;
        m.variant = v;
        m.g1 = 0.9;
        m.g2 = 0.4;
        m.kappa1 = 0.3;
        m.kappa2 = 0.2;
        m.gamma_m = 0.05;
        m.n_th = 0.7;
        m.n_0 = 0.4;
        const auto s0 = FockState::initial(cfg, m);
        const auto sched = CouplingSchedule::constant(m.g1, m.g2, 2.0);
        FockOptions opts;
        opts.step_factor = 0.05;
        opts.leakage_threshold = 1.0;
        const auto run = lindblad_evolve(s0, m, sched, {0.0, 0.8, 2.0}, opts);
        const MatrixXcd L = dense_liouvillian(*s0.space, m);
        for (int k : {1, 2}) {
            const MatrixXcd want = dense_evolve(L, s0.dense(), run.states[k].t);
            CHECK((run.states[k].dense() - want).cwiseAbs().maxCoeff() < 1e-9);
            CHECK(run.states[k].trace() == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("Fock moments track the Gaussian evolution") {
    FockConfig cfg;
    cfg.dims = {8, 8, 8};
    const auto m = InterfaceModel::two_tone(1.0, 0.2, 0.1, 0.15, 0.01, 0.2, 0.2);
    const double t1 = interference_time(1.0, 1);
    const auto sched = CouplingSchedule::constant(m.g1, m.g2, t1);
    const auto fock = lindblad_evolve(FockState::initial(cfg, m), m, sched, {0.0, t1});
    const auto gauss = evolve(initial_state(m), m, sched, {0.0, t1});
    const auto fc = covariance_from_fock(fock.states[1]);
    CHECK(fc.reliable);
    CHECK(fock.truncation_reliable);
    CHECK((fc.state.sigma - gauss[1].sigma).cwiseAbs().maxCoeff() < 2e-3);
    CHECK(std::abs(log_negativity(fc.state) - log_negativity(gauss[1])) < 0.01);
}

TEST_CASE("leakage is flagged or thrown") {
    FockConfig cfg;
    cfg.dims = {3, 3, 3};
    const auto m = InterfaceModel::two_tone(1.0, 0.8, 0.05, 0.05, 0.01, 0.0, 0.0);
    const auto sched = CouplingSchedule::constant(m.g1, m.g2, 3.0);
    const auto run = lindblad_evolve(FockState::initial(cfg, m), m, sched, {0.0, 3.0});
    CHECK_FALSE(run.truncation_reliable);
    CHECK(run.max_top_population > 1e-4);
    CHECK(run.leakage_time > 0.0);
    FockOptions strict;
    strict.throw_on_leakage = true;
    CHECK_THROWS_AS(lindblad_evolve(FockState::initial(cfg, m), m, sched, {0.0, 3.0}, strict), TruncationError);
    CHECK_THROWS_AS(lindblad_evolve(FockState::initial(cfg, m), m, CouplingSchedule::resonant_swap(1.0, 1), {0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("beamsplitter transfer against a piecewise-exponential propagator") {
    // Single-excitation Heisenberg equations for (a1, b, a2):
    // d/dt v = −i h(t) v, h = [[0, g1, 0], [g1, 0, g2], [0, g2, 0]].
    for (int n : {1, 2, 4}) {
        const auto tc = beamsplitter_transfer_check(n);
        const auto sched = CouplingSchedule::resonant_swap(1.0, n);
        const int steps = 4000 * n;
        const double h = sched.t_final() / steps;
        Eigen::Matrix3cd U = Eigen::Matrix3cd::Identity();
        for (int s = 0; s < steps; ++s) {
            const auto [g1, g2] = sched.couplings((s + 0.5) * h);
            Eigen::Matrix3cd hm = Eigen::Matrix3cd::Zero();
            hm(0, 1) = hm(1, 0) = g1;
            hm(1, 2) = hm(2, 1) = g2;
            U = Eigen::Matrix3cd((cd(0, -h) * hm).exp()) * U;
        }
        Eigen::Matrix2cd cav;
        cav << U(0, 0), U(0, 2), U(2, 0), U(2, 2);
        CHECK((tc.transfer - cav).cwiseAbs().maxCoeff() < 1e-6);
        const double sgn = n % 2 ? -1.0 : 1.0;
        Eigen::Matrix2d expected;
        expected << 1, -sgn, 1, sgn;
        expected /= std::sqrt(2.0);
        CHECK((tc.expected - expected).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(tc.deviation == doctest::Approx((tc.transfer - expected.cast<cd>()).cwiseAbs().maxCoeff()));
    }
    // Convergence towards the ideal splitter as the swap slows down.
    CHECK(beamsplitter_transfer_check(8).deviation < beamsplitter_transfer_check(2).deviation);
}

TEST_CASE("discrete entanglement of reference states") {
    FockConfig cfg;
    cfg.dims = {2, 2, 2};
    const FockSpace sp(cfg, Variant::DoubleBeamsplitter);
    Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(8);
    ket(sp.index(1, 0, 0)) = 1.0 / std::sqrt(2.0);
    ket(sp.index(0, 0, 1)) = -1.0 / std::sqrt(2.0);
    const auto bell = discrete_entanglement(FockState::from_ket(cfg, Variant::DoubleBeamsplitter, ket));
    CHECK(bell.log_negativity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bell.fidelity_minus == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bell.fidelity_plus == doctest::Approx(0.0));
    CHECK(bell.fidelity(-1) == bell.fidelity_minus);

    const auto product = discrete_entanglement(FockState::number_state(cfg, Variant::DoubleBeamsplitter, 1, 0, 0));
    CHECK(product.log_negativity == doctest::Approx(0.0));
    CHECK(product.fidelity_plus == doctest::Approx(0.5));
    const MatrixXcd rc = reduced_cavity_state(FockState::number_state(cfg, Variant::DoubleBeamsplitter, 1, 1, 0));
    CHECK(rc(2, 2).real() == doctest::Approx(1.0));  // |1₁0₂⟩ at n1·d2 + n2 = 2
}

TEST_CASE("undamped swap from |1,0> ends near the Bell state") {
    FockConfig cfg;
    cfg.dims = {3, 6, 3};
    InterfaceModel m;
    m.variant = Variant::DoubleBeamsplitter;
    const auto sched = CouplingSchedule::resonant_swap(1.0, 4);
    const auto run = lindblad_evolve(FockState::single_photon(cfg, m, 0), m, sched, {0.0, sched.t_final()});
    const auto d = discrete_entanglement(run.states.back());
    CHECK(d.fidelity_plus > 0.999);
    // RK4 is not positivity preserving; negative eigenvalues shrink as h⁴.
    CHECK(run.states.back().is_physical(1e-5));
    FockOptions fine;
    fine.step_factor = 0.1;
    const auto run_fine = lindblad_evolve(FockState::single_photon(cfg, m, 0), m, sched, {0.0, sched.t_final()}, fine);
    CHECK(run_fine.states.back().is_physical(1e-9));
}
