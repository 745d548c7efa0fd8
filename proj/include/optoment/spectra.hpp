// spectra.hpp — stationary frequency-domain response: transfer functions,
// filtered output modes and their entanglement, dark/bright mode excitation
//
// Fourier convention: f(t) = (2π)^(−1/2) ∫ f(ω) e^(−iωt) dω. With
// i dv/dt = M v + i√K v_in this gives v(ω) = i(ωI − M)⁻¹√K v_in(ω) and, via
// a_out = √κ a − a_in, v_out(ω) = [√K i(ωI − M)⁻¹ √K − I] v_in(ω).
// For two-tone squeezing the third component of v(ω) is a₂(−ω)†, so each row
// of the response already pairs cavity 1 at +ω with cavity 2 at −ω.

#pragma once

#include "optoment/gaussian.hpp"
#include "optoment/model.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace optoment {

struct FilterSpec {
    enum class Profile { Rect };

    double delta_omega{0.0};
    std::vector<double> centers;
    Profile profile{Profile::Rect};

    // g_d(ω) = 1/√Δω on (−Δω/2, Δω/2), else 0.
    double amplitude(double omega) const;
    // ∫|g_d|² dω; exactly 1 for Rect.
    double normalization() const;
    void validate() const;

    // Centers kΔω for integer k with |kΔω| ≤ omega_max.
    static FilterSpec on_lattice(double delta_omega, double omega_max);
};

// Which input channels feed the output spectral densities.
struct NoiseChannels {
    bool cavity1{true};
    bool mechanical{true};
    bool cavity2{true};
};

struct TransferFunction {
    Eigen::Matrix3cd internal;          // v(ω) = internal · v_in(ω)
    Eigen::Matrix3cd output;            // v_out(ω) = output · v_in(ω)
    Eigen::Matrix3cd conjugate_output;  // v_out(−ω)† = conjugate_output · v_in(−ω)†
};

// Throws std::domain_error when ωI − M is singular.
TransferFunction transfer_function(const InterfaceModel& model, double omega);

// Joint covariance (x_A, p_A, x_B, p_B) of A = cavity-1 output filtered at
// +ω_n and B = cavity-2 output filtered at −ω_n. Two-tone squeezing only;
// requires a stable model and Δω ≤ g₀/10.
Matrix4d filtered_output_covariance(const InterfaceModel& model, const FilterSpec& filter, double omega_n,
                                    const NoiseChannels& channels = {});

struct SpectralResult {
    std::vector<double> omega;
    std::vector<double> E_N_out;
    std::string pair_convention{"A = cavity-1 output filtered at +omega_n; B = cavity-2 output filtered at -omega_n"};
};

SpectralResult output_entanglement_spectrum(const InterfaceModel& model, const FilterSpec& filter);

struct ModeExcitation {
    // Amplitude of each mode per unit input on (a_in⁽¹⁾, b_in, a_in⁽²⁾†).
    Eigen::Vector3cd dark_amp_per_input;
    Eigen::Vector3cd bright_sym_amp_per_input;  // (α₂ + α₃)/√2
    Eigen::Vector3cd bright_plus_amp_per_input;
    Eigen::Vector3cd bright_minus_amp_per_input;
};

ModeExcitation dark_mode_excitation(const InterfaceModel& model, double omega);

// Ratio tr σ_mech / tr σ_cav of the filtered output covariance at ω_n, where
// each part keeps only that input's spectral density.
double mechanical_noise_ratio(const InterfaceModel& model, double delta_omega, double omega_n = 0.0);

// Internal-mode covariance rebuilt from (2π)⁻¹∫ G Ns G† dω over
// [−W, W], W = window_factor·g₀, plus the analytic 1/ω² and 1/ω⁴ tails.
CovarianceState spectral_internal_covariance(const InterfaceModel& model, double window_factor = 20.0);

}  // namespace optoment
