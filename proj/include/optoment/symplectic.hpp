// symplectic.hpp — quadrature conventions and symplectic helpers
//
// Convention used throughout the library:
//   x = (a + a†)/√2,  p = (a − a†)/(i√2),  [x, p] = i
// Quadratures are interleaved per mode, (x₁, p₁, x₂, p₂, ...). The vacuum
// covariance is ½·I and σ_ij = ½⟨{R_i, R_j}⟩ − ⟨R_i⟩⟨R_j⟩.

#pragma once

#include <Eigen/Dense>

namespace optoment {

// Block-diagonal symplectic form ⊕ [[0, 1], [−1, 0]] for `modes` modes.
Eigen::MatrixXd symplectic_form(Eigen::Index modes);

// Real quadrature matrix of the linear map c' = P c + Q c† on mode operators.
// Used both for Heisenberg transfer maps and for Langevin drift matrices
// (dc/dt = X c + Y c† gives dR/dt = quadrature_map(X, Y) R).
Eigen::MatrixXd quadrature_map(const Eigen::MatrixXcd& P, const Eigen::MatrixXcd& Q);

// Covariance from symmetrized mode moments:
//   s_ij = ½⟨{c_i, c_j†}⟩  (Hermitian),   m_ij = ½⟨{c_i, c_j}⟩  (symmetric).
// Both are central moments (means already removed).
Eigen::MatrixXd covariance_from_moments(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& m);

// Symplectic eigenvalues ν_k ≥ 0 of a 2n×2n covariance, ascending.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& sigma);

// σ + (i/2)Ω ⪰ 0, tested through ν_k ≥ ½ − tol.
bool is_physical(const Eigen::MatrixXd& sigma, double tol = 1e-9);

// Gaussian purity 1 / (2ⁿ √det σ).
double gaussian_purity(const Eigen::MatrixXd& sigma);

}  // namespace optoment
