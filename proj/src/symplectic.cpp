// symplectic.cpp — quadrature conventions and symplectic helpers

#include "optoment/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optoment {

Eigen::MatrixXd symplectic_form(Eigen::Index modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

Eigen::MatrixXd quadrature_map(const Eigen::MatrixXcd& P, const Eigen::MatrixXcd& Q) {
    if (P.rows() != P.cols() || Q.rows() != P.rows() || Q.cols() != P.cols()) {
        throw std::invalid_argument("quadrature_map: P and Q must be square and equal-sized");
    }
    const Eigen::Index n = P.rows();
    Eigen::MatrixXd S(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto sum = P(i, j) + Q(i, j);
            const auto diff = P(i, j) - Q(i, j);
            S(2 * i, 2 * j) = sum.real();
            S(2 * i, 2 * j + 1) = Q(i, j).imag() - P(i, j).imag();
            S(2 * i + 1, 2 * j) = sum.imag();
            S(2 * i + 1, 2 * j + 1) = diff.real();
        }
    }
    return S;
}

Eigen::MatrixXd covariance_from_moments(const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& m) {
    if (s.rows() != s.cols() || m.rows() != s.rows() || m.cols() != s.cols()) {
        throw std::invalid_argument("covariance_from_moments: shape mismatch");
    }
    const Eigen::Index n = s.rows();
    Eigen::MatrixXd sigma(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            sigma(2 * i, 2 * j) = m(i, j).real() + s(i, j).real();
            sigma(2 * i + 1, 2 * j + 1) = s(i, j).real() - m(i, j).real();
            sigma(2 * i, 2 * j + 1) = m(i, j).imag() - s(i, j).imag();
            sigma(2 * i + 1, 2 * j) = m(j, i).imag() - s(j, i).imag();
        }
    }
    return sigma;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0) {
        throw std::invalid_argument("symplectic_eigenvalues: covariance must be 2n x 2n");
    }
    const Eigen::Index n = sigma.rows() / 2;
    // Spectrum of iΩσ is {±ν_k}; take the moduli and keep one of each pair.
    const Eigen::MatrixXcd generator =
        std::complex<double>(0.0, 1.0) * (symplectic_form(n) * sigma).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(generator, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symplectic_eigenvalues: eigen decomposition failed");
    }
    std::vector<double> moduli(static_cast<std::size_t>(2 * n));
    for (Eigen::Index k = 0; k < 2 * n; ++k) {
        moduli[static_cast<std::size_t>(k)] = std::abs(solver.eigenvalues()(k));
    }
    std::sort(moduli.begin(), moduli.end());
    Eigen::VectorXd nu(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        nu(k) = 0.5 * (moduli[static_cast<std::size_t>(2 * k)] + moduli[static_cast<std::size_t>(2 * k + 1)]);
    }
    return nu;
}

bool is_physical(const Eigen::MatrixXd& sigma, double tol) {
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
        return false;
    }
    return symplectic_eigenvalues(sigma).minCoeff() >= 0.5 - tol;
}

double gaussian_purity(const Eigen::MatrixXd& sigma) {
    const double modes = static_cast<double>(sigma.rows() / 2);
    return 1.0 / (std::pow(2.0, modes) * std::sqrt(sigma.determinant()));
}

}  // namespace optoment
