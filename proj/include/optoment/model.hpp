// model.hpp — three-mode optomechanical interface: parameters, coupling
// schedules, Langevin matrices, stability and eigenmode analysis
//
// Mode order everywhere is (cavity 1, mechanics, cavity 2); quadrature order
// is (x₁, p₁, x_m, p_m, x₂, p₂). Rates share one arbitrary frequency unit and
// ħ = 1.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace optoment {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix4d = Eigen::Matrix4d;

enum class Variant {
    TwoToneSqueezing,    // cavity 1 red-detuned (beamsplitter), cavity 2 blue-detuned (squeezing)
    DoubleBeamsplitter,  // both cavities red-detuned
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct InterfaceModel {
    Variant variant{Variant::TwoToneSqueezing};
    double g1{0.0};
    double g2{0.0};
    double kappa1{0.0};
    double kappa2{0.0};
    double gamma_m{0.0};
    double n_th{0.0};  // bath occupation
    double n_0{0.0};   // initial mechanical occupation

    // g₁ = g₀ cosh r, g₂ = g₀ sinh r.
    static InterfaceModel two_tone(double g0, double r, double kappa1, double kappa2,
                                   double gamma_m, double n_th = 0.0, double n_0 = 0.0);

    // Throws std::invalid_argument on negative or non-finite parameters.
    void validate() const;

    // atanh(g₂/g₁); +inf when g₂ ≥ g₁.
    double squeezing() const;

    // Magnitude of the nonzero zero-damping eigenvalues: √(g₁² − g₂²) for
    // two-tone squeezing (NaN when g₂ > g₁), √(g₁² + g₂²) for the beamsplitter pair.
    double g0() const;

    InterfaceModel with_couplings(double c1, double c2) const;
    InterfaceModel without_damping() const;
};

// Constant couplings.
struct ConstantCoupling {
    double g1{0.0};
    double g2{0.0};
};

// g₁(t) = g₀ cosh(λt), g₂(t) = g₀ sinh(λt).
struct AdiabaticSqueeze {
    double g0{0.0};
    double lambda{0.0};
};

// g₁(t) = g₀ sin(λt), g₂(t) = −g₀ cos(λt); two red-detuned cavities.
struct BeamsplitterSwap {
    double g0{0.0};
    double lambda{0.0};
};

class CouplingSchedule {
public:
    using Kind = std::variant<ConstantCoupling, AdiabaticSqueeze, BeamsplitterSwap>;

    CouplingSchedule(Kind kind, double t_final);

    static CouplingSchedule constant(double g1, double g2, double t_final);
    static CouplingSchedule adiabatic_squeeze(double g0, double lambda, double t_final);
    static CouplingSchedule beamsplitter_swap(double g0, double lambda, double t_final);
    // λ = g₀/(4n) and t_f = π/(4λ): the swap lands on a bright-mode phase of nπ.
    static CouplingSchedule resonant_swap(double g0, int n);

    const Kind& kind() const noexcept { return kind_; }
    double t_final() const noexcept { return t_final_; }

    std::pair<double, double> couplings(double t) const;
    // Largest |g₁|, |g₂| reached on [t0, t1].
    double max_coupling(double t0, double t1) const;
    // λ/g₀ for the time-dependent schedules, 0 for constant couplings.
    double adiabaticity() const;
    // Non-fatal diagnostics (e.g. λ/g₀ > 0.1).
    std::vector<std::string> warnings() const;
    // Variant implied by the schedule, if it implies one.
    bool requires_beamsplitter() const;

private:
    Kind kind_;
    double t_final_;
};

struct DynamicsMatrices {
    Eigen::Matrix3cd M;  // i dv/dt = M v + i√K v_in
    Matrix6d A;          // dσ/dt = Aσ + σAᵀ + D
    Matrix6d D;
    Eigen::Matrix3d K;   // Diag[κ₁, γ_m, κ₂]
};

// M acts on (a₁, b, a₂†) for two-tone squeezing and on (a₁, b, a₂) for the
// double beamsplitter.
DynamicsMatrices dynamics_matrix(const InterfaceModel& model, double g1, double g2);
inline DynamicsMatrices dynamics_matrix(const InterfaceModel& model) {
    return dynamics_matrix(model, model.g1, model.g2);
}

// Drift matrix alone (cheap path used inside integrators).
Matrix6d drift_matrix(const InterfaceModel& model, double g1, double g2);
Matrix6d diffusion_matrix(const InterfaceModel& model);

struct StabilityReport {
    bool stable{false};
    double margin{0.0};  // −max Re spec(A)
    bool approx_condition_holds{false};
};

StabilityReport stability_check(const InterfaceModel& model);

// g₁²/g₂² > max{κ₂/κ₁, κ₁/κ₂}, evaluated on its own.
bool approximate_stability_condition(const InterfaceModel& model);

struct EigenmodeReport {
    // (dark, bright with Re ≈ +g₀, bright with Re ≈ −g₀): |Re λ| ascending.
    std::array<std::complex<double>, 3> eigenvalues{};
    double delta_lambda1{0.0};
    double delta_lambda2{0.0};
    // Left eigenvectors (mode = w·v), each scaled to best match its
    // zero-damping counterpart:
    //   dark   (−i sinh r, 0, cosh r)       = β₂†
    //   bright (cosh r, ±1, i sinh r)/√2    = (β₁ ± b)/√2
    Eigen::Vector3cd dark_mode_coeffs;
    Eigen::Vector3cd bright_plus_coeffs;
    Eigen::Vector3cd bright_minus_coeffs;
    double mechanical_leakage{0.0};
    double r{0.0};
    double g0{0.0};
};

// Two-tone squeezing only, g₁ > g₂. Throws ClassificationError when
// eigenvalues collide or the overlap assignment is ambiguous.
EigenmodeReport eigenmode_analysis(const InterfaceModel& model);

// Zero-damping analytic left eigenvectors (dark, bright+, bright−).
std::array<Eigen::Vector3cd, 3> analytic_modes(double r);

// Quadrature-basis map (a₁, a₂) → (β₁, β₂) on (x₁, p₁, x₂, p₂).
Matrix4d bogoliubov_modes(double r);

}  // namespace optoment
