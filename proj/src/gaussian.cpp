// gaussian.cpp — covariance-matrix dynamics and entanglement measures

#include "optoment/gaussian.hpp"

#include "optoment/errors.hpp"
#include "optoment/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace optoment {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

Matrix6d lyapunov_rhs(const Matrix6d& A, const Matrix6d& sigma, const Matrix6d& D) {
    const Matrix6d As = A * sigma;
    return As + As.transpose() + D;
}

void check_grid(const std::vector<double>& t_grid, double t0) {
    if (t_grid.empty()) throw std::invalid_argument("evolve: empty time grid");
    if (std::abs(t_grid.front() - t0) > 1e-12 * std::max(1.0, std::abs(t0))) {
        throw std::invalid_argument("evolve: time grid must start at the state's time");
    }
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (!(t_grid[k] > t_grid[k - 1])) {
            throw std::invalid_argument("evolve: time grid must be strictly increasing");
        }
    }
}

}  // namespace

// ------------------------------ state ---------------------------------------

bool CovarianceState::is_physical(double tol) const {
    return optoment::is_physical(sigma, tol);
}

Matrix4d CovarianceState::pair_block(int mode_a, int mode_b) const {
    if (mode_a < 0 || mode_a > 2 || mode_b < 0 || mode_b > 2 || mode_a == mode_b) {
        throw std::invalid_argument("pair_block: modes must be two distinct indices in {0, 1, 2}");
    }
    const std::array<int, 4> idx{2 * mode_a, 2 * mode_a + 1, 2 * mode_b, 2 * mode_b + 1};
    Matrix4d block;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) block(i, j) = sigma(idx[i], idx[j]);
    }
    return block;
}

CovarianceState initial_state(const InterfaceModel& model) {
    model.validate();
    CovarianceState state;
    state.sigma = Matrix6d::Identity() * 0.5;
    state.sigma(2, 2) = state.sigma(3, 3) = model.n_0 + 0.5;
    state.t = 0.0;
    return state;
}

// ------------------------------ dynamics ------------------------------------

std::vector<CovarianceState> evolve(const CovarianceState& state, const InterfaceModel& model,
                                    const CouplingSchedule& schedule, const std::vector<double>& t_grid,
                                    const EvolveOptions& options) {
    model.validate();
    check_grid(t_grid, state.t);
    if (schedule.requires_beamsplitter() && model.variant != Variant::DoubleBeamsplitter) {
        throw std::invalid_argument("evolve: a beamsplitter-swap schedule needs the double-beamsplitter variant");
    }

    const double g_max = schedule.max_coupling(t_grid.front(), t_grid.back());
    const double k_max = std::max({model.kappa1, model.kappa2, model.gamma_m});
    const double rate = std::max(g_max, k_max);
    const double h_max = rate > 0.0 ? options.step_factor / rate : std::numeric_limits<double>::infinity();
    const Matrix6d D = diffusion_matrix(model);

    auto drift_at = [&](double t) {
        const auto [g1, g2] = schedule.couplings(t);
        return drift_matrix(model, g1, g2);
    };

    std::vector<CovarianceState> out;
    out.reserve(t_grid.size());
    CovarianceState current = state;
    current.t = t_grid.front();
    out.push_back(current);

    Matrix6d sigma = state.sigma;
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        const double t_start = t_grid[k - 1];
        const double span = t_grid[k] - t_start;
        const auto steps = static_cast<long>(std::max(1.0, std::ceil(span / h_max)));
        const double h = span / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
            const double t = t_start + static_cast<double>(s) * h;
            const Matrix6d A0 = drift_at(t);
            const Matrix6d Ah = drift_at(t + 0.5 * h);
            const Matrix6d A1 = drift_at(t + h);
            const Matrix6d k1 = lyapunov_rhs(A0, sigma, D);
            const Matrix6d k2 = lyapunov_rhs(Ah, sigma + 0.5 * h * k1, D);
            const Matrix6d k3 = lyapunov_rhs(Ah, sigma + 0.5 * h * k2, D);
            const Matrix6d k4 = lyapunov_rhs(A1, sigma + h * k3, D);
            sigma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!sigma.allFinite() || sigma.cwiseAbs().maxCoeff() > options.overflow_guard) {
                std::ostringstream os;
                os << "evolve: covariance diverged (overflow guard " << options.overflow_guard
                   << ") at t = " << t + h;
                throw DivergenceError(os.str(), t + h);
            }
        }
        sigma = 0.5 * (sigma + sigma.transpose());
        current.sigma = sigma;
        current.t = t_grid[k];
        out.push_back(current);
    }
    return out;
}

// ------------------------------ entanglement --------------------------------

double log_negativity(const Matrix4d& sigma) {
    const double det_a = sigma.topLeftCorner<2, 2>().determinant();
    const double det_b = sigma.bottomRightCorner<2, 2>().determinant();
    const double det_c = sigma.topRightCorner<2, 2>().determinant();
    const double det_s = sigma.determinant();
    // Uncertainty principle for two modes: det σ ≥ 1/16, Δ ≤ ¼ + 4 det σ.
    {
        const double d = det_a + det_b + 2.0 * det_c;
        const double tol = 1e-9 * std::max(1.0, d * d);
        if (!(det_s >= 1.0 / 16.0 - tol) || !(d <= 0.25 + 4.0 * det_s + tol)) {
            throw std::domain_error("log_negativity: covariance violates the uncertainty principle");
        }
    }
    const double delta = det_a + det_b - 2.0 * det_c;
    double disc = delta * delta - 4.0 * det_s;
    if (disc < 0.0) {
        if (disc < -1e-9 * std::max(1.0, delta * delta)) {
            throw std::domain_error("log_negativity: covariance is not physical (negative discriminant)");
        }
        disc = 0.0;
    }
    // ν̃₋² ν̃₊² = det σ and ν̃₋² + ν̃₊² = Δ̃; this form avoids cancellation.
    const double denom = delta + std::sqrt(disc);
    if (!(denom > 0.0) || !(det_s > 0.0)) {
        throw std::domain_error("log_negativity: covariance is not physical");
    }
    const double nu_minus = std::sqrt(2.0 * det_s / denom);
    return std::max(0.0, -std::log2(2.0 * nu_minus));
}

double log_negativity(const CovarianceState& state, std::pair<int, int> mode_pair) {
    return log_negativity(state.pair_block(mode_pair.first, mode_pair.second));
}

Matrix4d analytic_transfer_constant(double r, int n) {
    if (n < 1) throw std::invalid_argument("analytic_transfer_constant: n must be >= 1");
    if (n % 2 == 0) return Matrix4d::Identity();
    const double c = std::cosh(2.0 * r);
    const double s = std::sinh(2.0 * r);
    // a₁' = −c a₁ − i s a₂†,  a₂' = i s a₁† + c a₂
    Eigen::Matrix2cd P = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd Q = Eigen::Matrix2cd::Zero();
    P(0, 0) = -c;
    Q(0, 1) = -I * s;
    Q(1, 0) = I * s;
    P(1, 1) = c;
    return quadrature_map(P, Q);
}

Matrix4d analytic_transfer_adiabatic(double r, int n) {
    if (n < 1) throw std::invalid_argument("analytic_transfer_adiabatic: n must be >= 1");
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    // a₁' = (−1)ⁿ c a₁ − i s a₂†,  a₂' = −(−1)ⁿ i s a₁† + c a₂
    Eigen::Matrix2cd P = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd Q = Eigen::Matrix2cd::Zero();
    P(0, 0) = sign * c;
    Q(0, 1) = -I * s;
    Q(1, 0) = -sign * I * s;
    P(1, 1) = c;
    return quadrature_map(P, Q);
}

EntanglementSeries entanglement_vs_time(const InterfaceModel& model, const CouplingSchedule& schedule,
                                        const std::vector<double>& t_grid, const EvolveOptions& options) {
    const auto states = evolve(initial_state(model), model, schedule, t_grid, options);
    EntanglementSeries series;
    series.times.reserve(states.size());
    series.E_N.reserve(states.size());
    for (const auto& s : states) {
        series.times.push_back(s.t);
        series.E_N.push_back(log_negativity(s));
    }
    return series;
}

// ------------------------------ stationary ----------------------------------

CovarianceState stationary_covariance(const InterfaceModel& model) {
    const StabilityReport report = stability_check(model);
    if (!report.stable) {
        std::ostringstream os;
        os << "stationary_covariance: model is not stable (margin " << report.margin << ")";
        throw UnstableModelError(os.str());
    }
    const Matrix6d A = drift_matrix(model, model.g1, model.g2);
    const Matrix6d D = diffusion_matrix(model);

    constexpr int n = 6;
    constexpr int unknowns = n * (n + 1) / 2;
    auto index = [](int i, int j) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i - 1) / 2 + (j - i);
    };
    Eigen::Matrix<double, unknowns, unknowns> L = Eigen::Matrix<double, unknowns, unknowns>::Zero();
    Eigen::Matrix<double, unknowns, 1> rhs;
    for (int p = 0; p < n; ++p) {
        for (int q = p; q < n; ++q) {
            const int row = index(p, q);
            rhs(row) = -D(p, q);
            for (int k = 0; k < n; ++k) {
                L(row, index(k, q)) += A(p, k);
                L(row, index(p, k)) += A(q, k);
            }
        }
    }
    const Eigen::Matrix<double, unknowns, 1> x = L.fullPivLu().solve(rhs);

    CovarianceState state;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) state.sigma(i, j) = x(index(i, j));
    }
    const double residual = lyapunov_rhs(A, state.sigma, D).cwiseAbs().maxCoeff();
    if (!(residual < 1e-10 * D.cwiseAbs().maxCoeff()) && D.cwiseAbs().maxCoeff() > 0.0) {
        std::ostringstream os;
        os << "stationary_covariance: Lyapunov residual " << residual << " exceeds tolerance";
        throw std::runtime_error(os.str());
    }
    state.t = std::numeric_limits<double>::infinity();
    return state;
}

double interference_time(double g0, int n) {
    return static_cast<double>(n) * std::numbers::pi / g0;
}

std::vector<double> linear_grid(double t_end, std::size_t points) {
    if (points < 2) throw std::invalid_argument("linear_grid: need at least two points");
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = t_end * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

std::vector<double> default_time_grid(double g0) {
    return linear_grid(3.0 * std::numbers::pi / g0, 2000);
}

}  // namespace optoment
