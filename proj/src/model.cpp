// model.cpp — Langevin matrices, stability and eigenmode analysis

#include "optoment/model.hpp"

#include "optoment/errors.hpp"
#include "optoment/symplectic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace optoment {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void require_finite_nonneg(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        std::ostringstream os;
        os << "InterfaceModel: " << name << " must be finite and >= 0 (got " << value << ")";
        throw std::invalid_argument(os.str());
    }
}

// Mode-level drift dc/dt = X c + Y c† on c = (a₁, b, a₂).
std::pair<Eigen::Matrix3cd, Eigen::Matrix3cd> mode_drift(const InterfaceModel& m, double g1, double g2) {
    Eigen::Matrix3cd X = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd Y = Eigen::Matrix3cd::Zero();
    X(0, 0) = -0.5 * m.kappa1;
    X(1, 1) = -0.5 * m.gamma_m;
    X(2, 2) = -0.5 * m.kappa2;
    X(0, 1) = X(1, 0) = -I * g1;
    if (m.variant == Variant::TwoToneSqueezing) {
        Y(1, 2) = Y(2, 1) = g2;
    } else {
        X(1, 2) = X(2, 1) = -I * g2;
    }
    return {X, Y};
}

}  // namespace

std::string to_string(Variant v) {
    return v == Variant::TwoToneSqueezing ? "two_tone_squeezing" : "double_beamsplitter";
}

Variant variant_from_string(const std::string& name) {
    if (name == "two_tone_squeezing") return Variant::TwoToneSqueezing;
    if (name == "double_beamsplitter") return Variant::DoubleBeamsplitter;
    throw std::invalid_argument("unknown variant '" + name +
                                "' (expected two_tone_squeezing | double_beamsplitter)");
}

InterfaceModel InterfaceModel::two_tone(double g0, double r, double kappa1, double kappa2,
                                        double gamma_m, double n_th, double n_0) {
    InterfaceModel m;
    m.variant = Variant::TwoToneSqueezing;
    m.g1 = g0 * std::cosh(r);
    m.g2 = g0 * std::sinh(r);
    m.kappa1 = kappa1;
    m.kappa2 = kappa2;
    m.gamma_m = gamma_m;
    m.n_th = n_th;
    m.n_0 = n_0;
    return m;
}

void InterfaceModel::validate() const {
    require_finite_nonneg(g1, "g1");
    require_finite_nonneg(g2, "g2");
    require_finite_nonneg(kappa1, "kappa1");
    require_finite_nonneg(kappa2, "kappa2");
    require_finite_nonneg(gamma_m, "gamma_m");
    require_finite_nonneg(n_th, "n_th");
    require_finite_nonneg(n_0, "n_0");
}

double InterfaceModel::squeezing() const {
    if (g2 >= g1) return std::numeric_limits<double>::infinity();
    return std::atanh(g2 / g1);
}

double InterfaceModel::g0() const {
    if (variant == Variant::DoubleBeamsplitter) return std::hypot(g1, g2);
    const double d = g1 * g1 - g2 * g2;
    return d >= 0.0 ? std::sqrt(d) : std::numeric_limits<double>::quiet_NaN();
}

InterfaceModel InterfaceModel::with_couplings(double c1, double c2) const {
    InterfaceModel m = *this;
    m.g1 = c1;
    m.g2 = c2;
    return m;
}

InterfaceModel InterfaceModel::without_damping() const {
    InterfaceModel m = *this;
    m.kappa1 = m.kappa2 = m.gamma_m = 0.0;
    return m;
}

// ------------------------------ schedules -----------------------------------

CouplingSchedule::CouplingSchedule(Kind kind, double t_final) : kind_(kind), t_final_(t_final) {
    if (!std::isfinite(t_final) || t_final <= 0.0) {
        throw std::invalid_argument("CouplingSchedule: t_final must be > 0");
    }
    std::visit(
        [](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCoupling>) {
                if (!(k.g1 >= 0.0) || !(k.g2 >= 0.0) || !std::isfinite(k.g1) || !std::isfinite(k.g2)) {
                    throw std::invalid_argument("CouplingSchedule: constant couplings must be finite and >= 0");
                }
            } else {
                if (!(k.g0 > 0.0) || !std::isfinite(k.g0)) {
                    throw std::invalid_argument("CouplingSchedule: g0 must be finite and > 0");
                }
                if (!(k.lambda >= 0.0) || !std::isfinite(k.lambda)) {
                    throw std::invalid_argument("CouplingSchedule: lambda must be finite and >= 0");
                }
            }
        },
        kind_);
}

CouplingSchedule CouplingSchedule::constant(double g1, double g2, double t_final) {
    return {ConstantCoupling{g1, g2}, t_final};
}

CouplingSchedule CouplingSchedule::adiabatic_squeeze(double g0, double lambda, double t_final) {
    return {AdiabaticSqueeze{g0, lambda}, t_final};
}

CouplingSchedule CouplingSchedule::beamsplitter_swap(double g0, double lambda, double t_final) {
    return {BeamsplitterSwap{g0, lambda}, t_final};
}

CouplingSchedule CouplingSchedule::resonant_swap(double g0, int n) {
    if (n < 1) throw std::invalid_argument("resonant_swap: n must be a positive integer");
    const double lambda = g0 / (4.0 * n);
    return beamsplitter_swap(g0, lambda, std::numbers::pi / (4.0 * lambda));
}

std::pair<double, double> CouplingSchedule::couplings(double t) const {
    return std::visit(
        [t](const auto& k) -> std::pair<double, double> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCoupling>) {
                return {k.g1, k.g2};
            } else if constexpr (std::is_same_v<T, AdiabaticSqueeze>) {
                return {k.g0 * std::cosh(k.lambda * t), k.g0 * std::sinh(k.lambda * t)};
            } else {
                return {k.g0 * std::sin(k.lambda * t), -k.g0 * std::cos(k.lambda * t)};
            }
        },
        kind_);
}

double CouplingSchedule::max_coupling(double t0, double t1) const {
    return std::visit(
        [t0, t1](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCoupling>) {
                return std::max(k.g1, k.g2);
            } else if constexpr (std::is_same_v<T, AdiabaticSqueeze>) {
                const double edge = std::max(std::abs(t0), std::abs(t1));
                return k.g0 * std::cosh(k.lambda * edge);
            } else {
                return k.g0;
            }
        },
        kind_);
}

double CouplingSchedule::adiabaticity() const {
    return std::visit(
        [](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantCoupling>) {
                return 0.0;
            } else {
                return k.lambda / k.g0;
            }
        },
        kind_);
}

std::vector<std::string> CouplingSchedule::warnings() const {
    std::vector<std::string> out;
    const double ratio = adiabaticity();
    if (ratio > 0.1) {
        std::ostringstream os;
        os << "lambda/g0 = " << ratio << " exceeds 0.1; adiabatic following is not guaranteed";
        out.push_back(os.str());
    }
    return out;
}

bool CouplingSchedule::requires_beamsplitter() const {
    return std::holds_alternative<BeamsplitterSwap>(kind_);
}

// ------------------------------ matrices ------------------------------------

Matrix6d drift_matrix(const InterfaceModel& model, double g1, double g2) {
    const auto [X, Y] = mode_drift(model, g1, g2);
    return quadrature_map(X, Y);
}

Matrix6d diffusion_matrix(const InterfaceModel& model) {
    Vector6d d;
    const double mech = 0.5 * model.gamma_m * (2.0 * model.n_th + 1.0);
    d << 0.5 * model.kappa1, 0.5 * model.kappa1, mech, mech, 0.5 * model.kappa2, 0.5 * model.kappa2;
    return d.asDiagonal();
}

DynamicsMatrices dynamics_matrix(const InterfaceModel& model, double g1, double g2) {
    DynamicsMatrices out;
    out.M << -0.5 * I * model.kappa1, g1, 0.0,
             g1, -0.5 * I * model.gamma_m, 0.0,
             0.0, 0.0, -0.5 * I * model.kappa2;
    if (model.variant == Variant::TwoToneSqueezing) {
        out.M(1, 2) = out.M(2, 1) = I * g2;
    } else {
        out.M(1, 2) = out.M(2, 1) = g2;
    }
    out.A = drift_matrix(model, g1, g2);
    out.D = diffusion_matrix(model);
    out.K = Eigen::Vector3d(model.kappa1, model.gamma_m, model.kappa2).asDiagonal();
    return out;
}

// ------------------------------ stability -----------------------------------

bool approximate_stability_condition(const InterfaceModel& model) {
    if (model.variant == Variant::DoubleBeamsplitter) return true;
    if (model.g2 == 0.0) return true;
    if (model.kappa1 <= 0.0 || model.kappa2 <= 0.0) return false;
    const double lhs = (model.g1 * model.g1) / (model.g2 * model.g2);
    const double rhs = std::max(model.kappa2 / model.kappa1, model.kappa1 / model.kappa2);
    return lhs > rhs;
}

StabilityReport stability_check(const InterfaceModel& model) {
    model.validate();
    const Matrix6d A = drift_matrix(model, model.g1, model.g2);
    Eigen::EigenSolver<Matrix6d> solver(A, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("stability_check: eigen decomposition failed");
    }
    const double max_re = solver.eigenvalues().real().maxCoeff();
    StabilityReport report;
    report.margin = -max_re;
    const double scale = std::max(A.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    report.stable = report.margin > 1e-12 * scale;
    report.approx_condition_holds = approximate_stability_condition(model);
    return report;
}

// ------------------------------ eigenmodes ----------------------------------

std::array<Eigen::Vector3cd, 3> analytic_modes(double r) {
    const double c = std::cosh(r);
    const double s = std::sinh(r);
    const double h = std::numbers::sqrt2 / 2.0;
    std::array<Eigen::Vector3cd, 3> modes;
    modes[0] << -I * s, 0.0, c;
    modes[1] << h * c, h, h * I * s;
    modes[2] << h * c, -h, h * I * s;
    return modes;
}

EigenmodeReport eigenmode_analysis(const InterfaceModel& model) {
    model.validate();
    if (model.variant != Variant::TwoToneSqueezing) {
        throw std::invalid_argument("eigenmode_analysis: requires the two-tone squeezing variant");
    }
    if (!(model.g1 > model.g2)) {
        throw std::invalid_argument("eigenmode_analysis: requires g1 > g2 (finite squeezing)");
    }
    EigenmodeReport report;
    report.r = model.squeezing();
    report.g0 = model.g0();

    const DynamicsMatrices dm = dynamics_matrix(model);
    // Left eigenvectors: w M = λ w  <=>  Mᵀ wᵀ = λ wᵀ.
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(dm.M.transpose(), true);
    if (solver.info() != Eigen::Success) {
        throw ClassificationError("eigenmode_analysis: eigen decomposition failed");
    }
    const Eigen::Vector3cd lambdas = solver.eigenvalues();
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(lambdas(i) - lambdas(j)) < 1e-9 * report.g0) {
                throw ClassificationError("eigenmode_analysis: eigenvalue collision; outside the strong-coupling regime");
            }
        }
    }

    const auto reference = analytic_modes(report.r);
    std::array<int, 3> assigned{-1, -1, -1};
    for (int k = 0; k < 3; ++k) {
        double best = -1.0;
        for (int j = 0; j < 3; ++j) {
            const Eigen::Vector3cd w = solver.eigenvectors().col(j);
            const double overlap = std::abs(reference[k].dot(w)) / (reference[k].norm() * w.norm());
            if (overlap > best) {
                best = overlap;
                assigned[k] = j;
            }
        }
    }
    if (assigned[0] == assigned[1] || assigned[0] == assigned[2] || assigned[1] == assigned[2]) {
        throw ClassificationError("eigenmode_analysis: ambiguous overlap with the zero-damping modes");
    }

    // Dark mode: match cavity components only; the mechanical entry is the leakage.
    Eigen::Vector3cd dark = solver.eigenvectors().col(assigned[0]);
    {
        const cd num = std::conj(dark(0)) * reference[0](0) + std::conj(dark(2)) * reference[0](2);
        const double den = std::norm(dark(0)) + std::norm(dark(2));
        dark *= num / den;
    }
    auto match_all = [](Eigen::Vector3cd w, const Eigen::Vector3cd& ref) {
        w *= w.dot(ref) / w.squaredNorm();
        return w;
    };

    report.eigenvalues = {lambdas(assigned[0]), lambdas(assigned[1]), lambdas(assigned[2])};
    report.delta_lambda1 = report.eigenvalues[0].imag();
    report.delta_lambda2 = report.eigenvalues[1].imag();
    report.dark_mode_coeffs = dark;
    report.bright_plus_coeffs = match_all(solver.eigenvectors().col(assigned[1]), reference[1]);
    report.bright_minus_coeffs = match_all(solver.eigenvectors().col(assigned[2]), reference[2]);
    report.mechanical_leakage = std::abs(dark(1));
    return report;
}

Matrix4d bogoliubov_modes(double r) {
    if (!std::isfinite(r) || r < 0.0) {
        throw std::invalid_argument("bogoliubov_modes: r must be finite and >= 0");
    }
    Eigen::Matrix2cd P = Eigen::Matrix2cd::Identity() * std::cosh(r);
    Eigen::Matrix2cd Q = Eigen::Matrix2cd::Zero();
    Q(0, 1) = Q(1, 0) = I * std::sinh(r);
    return quadrature_map(P, Q);
}

}  // namespace optoment
