// gaussian.hpp — covariance-matrix dynamics, stationary states and
// logarithmic negativity for the three-mode Gaussian state

#pragma once

#include "optoment/model.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace optoment {

struct CovarianceState {
    Matrix6d sigma{Matrix6d::Identity() * 0.5};
    Vector6d mean{Vector6d::Zero()};
    double t{0.0};

    // Symmetric to 1e-12 (relative) and ν_k ≥ ½ − tol.
    bool is_physical(double tol = 1e-9) const;
    // 4×4 block of two modes (0 = cavity 1, 1 = mechanics, 2 = cavity 2).
    Matrix4d pair_block(int mode_a, int mode_b) const;
    Matrix4d cavity_block() const { return pair_block(0, 2); }
};

struct EntanglementSeries {
    std::vector<double> times;
    std::vector<double> E_N;
};

struct EvolveOptions {
    // h ≤ step_factor · min(1/g_max, 1/κ_max).
    double step_factor{0.01};
    double overflow_guard{1e12};
};

// Vacuum cavities, thermal mechanics with occupation n₀, t = 0.
CovarianceState initial_state(const InterfaceModel& model);

// Integrates dσ/dt = A(t)σ + σA(t)ᵀ + D with a fixed-step classical RK4.
// Each grid interval is split into equal substeps obeying the step bound.
// Throws DivergenceError when an entry exceeds the overflow guard.
std::vector<CovarianceState> evolve(const CovarianceState& state, const InterfaceModel& model,
                                    const CouplingSchedule& schedule, const std::vector<double>& t_grid,
                                    const EvolveOptions& options = {});

// max(0, −log₂(2ν̃₋)) of a two-mode covariance. Throws std::domain_error for
// non-physical input.
double log_negativity(const Matrix4d& sigma);
double log_negativity(const CovarianceState& state, std::pair<int, int> mode_pair = {0, 2});

// Odd n: (a₁, a₂†) → [[cosh 2r, −i sinh 2r], [i sinh 2r, cosh 2r]] (−a₁, a₂†);
// even n: identity. Quadrature basis (x₁, p₁, x₂, p₂).
Matrix4d analytic_transfer_constant(double r, int n);

// (a₁, a₂†) → [[cosh r, −i sinh r], [i sinh r, cosh r]] ((−1)ⁿ a₁, a₂†).
Matrix4d analytic_transfer_adiabatic(double r, int n);

EntanglementSeries entanglement_vs_time(const InterfaceModel& model, const CouplingSchedule& schedule,
                                        const std::vector<double>& t_grid, const EvolveOptions& options = {});

// Solves Aσ + σAᵀ + D = 0 on the 21 independent entries. Throws
// UnstableModelError when the model has no stationary state.
CovarianceState stationary_covariance(const InterfaceModel& model);

// Interference times t_n = nπ/g₀.
double interference_time(double g0, int n);

// `points` evenly spaced samples on [0, t_end], inclusive.
std::vector<double> linear_grid(double t_end, std::size_t points);

// Default grid: 2000 points over [0, 3π/g₀].
std::vector<double> default_time_grid(double g0);

}  // namespace optoment
