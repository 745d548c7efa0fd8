// spectra.cpp — stationary frequency-domain response and filtered outputs

#include "optoment/spectra.hpp"

#include "optoment/errors.hpp"
#include "optoment/quadrature.hpp"
#include "optoment/symplectic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace optoment {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

// Symmetrized input spectral density ½⟨{v_in, v_in†}⟩ (flat in ω).
Eigen::Matrix3d input_density(const InterfaceModel& model, const NoiseChannels& channels) {
    Eigen::Vector3d d(channels.cavity1 ? 0.5 : 0.0,
                      channels.mechanical ? model.n_th + 0.5 : 0.0,
                      channels.cavity2 ? 0.5 : 0.0);
    return d.asDiagonal();
}

Eigen::Matrix3cd sqrt_k(const InterfaceModel& model) {
    return Eigen::Vector3cd(std::sqrt(model.kappa1), std::sqrt(model.gamma_m), std::sqrt(model.kappa2))
        .asDiagonal();
}

Eigen::Matrix3cd internal_response(const Eigen::Matrix3cd& M, const Eigen::Matrix3cd& sk, double omega) {
    const Eigen::Matrix3cd shifted = omega * Eigen::Matrix3cd::Identity() - M;
    Eigen::FullPivLU<Eigen::Matrix3cd> lu(shifted);
    if (!lu.isInvertible() || lu.rcond() < 1e-14) {
        std::ostringstream os;
        os << "transfer_function: omega = " << omega << " hits an undamped eigenvalue of M";
        throw std::domain_error(os.str());
    }
    return I * lu.inverse() * sk;
}

void require_two_tone(const InterfaceModel& model, const char* who) {
    if (model.variant != Variant::TwoToneSqueezing) {
        throw std::invalid_argument(std::string(who) + ": requires the two-tone squeezing variant");
    }
}

void require_stable(const InterfaceModel& model, const char* who) {
    const auto report = stability_check(model);
    if (!report.stable) {
        std::ostringstream os;
        os << who << ": model is not stable (margin " << report.margin << ")";
        throw UnstableModelError(os.str());
    }
}

// ½⟨{v_out, v_out†}⟩ averaged over the rect window around ω_n.
Eigen::Matrix3cd windowed_output_density(const InterfaceModel& model, double delta_omega, double omega_n,
                                         const NoiseChannels& channels) {
    const DynamicsMatrices dm = dynamics_matrix(model);
    const Eigen::Matrix3cd sk = sqrt_k(model);
    const Eigen::Matrix3cd density = input_density(model, channels).cast<cd>();
    auto integrand = [&](double omega) -> Eigen::Matrix3cd {
        const Eigen::Matrix3cd T = sk * internal_response(dm.M, sk, omega) - Eigen::Matrix3cd::Identity();
        return T * density * T.adjoint();
    };
    AdaptiveOptions opts;
    opts.order = 32;
    opts.rel_tol = 1e-8;
    const auto result = integrate_adaptive<Eigen::Matrix3cd>(integrand, omega_n - 0.5 * delta_omega,
                                                             omega_n + 0.5 * delta_omega, opts);
    return result.value / delta_omega;
}

}  // namespace

// ------------------------------ filter --------------------------------------

double FilterSpec::amplitude(double omega) const {
    const double half = 0.5 * delta_omega;
    return (omega > -half && omega < half) ? 1.0 / std::sqrt(delta_omega) : 0.0;
}

double FilterSpec::normalization() const {
    // |g_d|² = 1/Δω on a window of width Δω.
    return delta_omega * (1.0 / delta_omega);
}

void FilterSpec::validate() const {
    if (!std::isfinite(delta_omega) || delta_omega <= 0.0) {
        throw std::invalid_argument("FilterSpec: delta_omega must be > 0");
    }
    for (double c : centers) {
        if (!std::isfinite(c)) throw std::invalid_argument("FilterSpec: centers must be finite");
    }
}

FilterSpec FilterSpec::on_lattice(double delta_omega, double omega_max) {
    FilterSpec spec;
    spec.delta_omega = delta_omega;
    spec.validate();
    const auto k_max = static_cast<long>(std::floor(omega_max / delta_omega + 1e-9));
    for (long k = -k_max; k <= k_max; ++k) spec.centers.push_back(static_cast<double>(k) * delta_omega);
    return spec;
}

// ------------------------------ response ------------------------------------

TransferFunction transfer_function(const InterfaceModel& model, double omega) {
    model.validate();
    const DynamicsMatrices dm = dynamics_matrix(model);
    const Eigen::Matrix3cd sk = sqrt_k(model);
    TransferFunction tf;
    tf.internal = internal_response(dm.M, sk, omega);
    tf.output = sk * tf.internal - Eigen::Matrix3cd::Identity();
    const Eigen::Matrix3cd mirrored = sk * internal_response(dm.M, sk, -omega) - Eigen::Matrix3cd::Identity();
    tf.conjugate_output = mirrored.conjugate();
    return tf;
}

Matrix4d filtered_output_covariance(const InterfaceModel& model, const FilterSpec& filter, double omega_n,
                                    const NoiseChannels& channels) {
    model.validate();
    filter.validate();
    require_two_tone(model, "filtered_output_covariance");
    require_stable(model, "filtered_output_covariance");
    if (filter.delta_omega > model.g0() / 10.0 * (1.0 + 1e-12)) {
        throw std::invalid_argument("filtered_output_covariance: delta_omega must be <= g0/10");
    }
    const Eigen::Matrix3cd P = windowed_output_density(model, filter.delta_omega, omega_n, channels);
    // A is built from v_out,1 and B† from v_out,3 over the same window.
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    s(0, 0) = P(0, 0).real();
    s(1, 1) = P(2, 2).real();
    m(0, 1) = m(1, 0) = P(0, 2);
    return covariance_from_moments(s, m);
}

SpectralResult output_entanglement_spectrum(const InterfaceModel& model, const FilterSpec& filter) {
    SpectralResult result;
    result.omega = filter.centers;
    result.E_N_out.reserve(filter.centers.size());
    for (double c : filter.centers) {
        result.E_N_out.push_back(log_negativity(filtered_output_covariance(model, filter, c)));
    }
    return result;
}

ModeExcitation dark_mode_excitation(const InterfaceModel& model, double omega) {
    require_stable(model, "dark_mode_excitation");
    const EigenmodeReport modes = eigenmode_analysis(model);
    const Eigen::Matrix3cd G = transfer_function(model, omega).internal;
    ModeExcitation ex;
    ex.dark_amp_per_input = (modes.dark_mode_coeffs.transpose() * G).transpose();
    ex.bright_plus_amp_per_input = (modes.bright_plus_coeffs.transpose() * G).transpose();
    ex.bright_minus_amp_per_input = (modes.bright_minus_coeffs.transpose() * G).transpose();
    ex.bright_sym_amp_per_input = (ex.bright_plus_amp_per_input + ex.bright_minus_amp_per_input) / std::numbers::sqrt2;
    return ex;
}

double mechanical_noise_ratio(const InterfaceModel& model, double delta_omega, double omega_n) {
    model.validate();
    require_two_tone(model, "mechanical_noise_ratio");
    require_stable(model, "mechanical_noise_ratio");
    const Eigen::Matrix3cd mech = windowed_output_density(model, delta_omega, omega_n, {false, true, false});
    const Eigen::Matrix3cd cav = windowed_output_density(model, delta_omega, omega_n, {true, false, true});
    const double mech_trace = mech(0, 0).real() + mech(2, 2).real();
    const double cav_trace = cav(0, 0).real() + cav(2, 2).real();
    return mech_trace / cav_trace;
}

CovarianceState spectral_internal_covariance(const InterfaceModel& model, double window_factor) {
    model.validate();
    require_stable(model, "spectral_internal_covariance");
    const DynamicsMatrices dm = dynamics_matrix(model);
    const Eigen::Matrix3cd sk = sqrt_k(model);
    const Eigen::Matrix3cd density = input_density(model, {}).cast<cd>();
    auto integrand = [&](double omega) -> Eigen::Matrix3cd {
        const Eigen::Matrix3cd G = internal_response(dm.M, sk, omega);
        return G * density * G.adjoint();
    };
    const double scale = std::max({model.g1, model.g2, model.kappa1, model.kappa2, model.gamma_m});
    const double W = window_factor * (model.g0() > 0.0 ? model.g0() : scale);
    AdaptiveOptions opts;
    opts.order = 32;
    opts.rel_tol = 1e-10;
    opts.initial_panels = 200;
    Eigen::Matrix3cd P = integrate_adaptive<Eigen::Matrix3cd>(integrand, -W, W, opts).value;

    // G N G† = Σ (ω − M)⁻¹ X (ω − M)⁻† with X = √K N √K; expand in 1/ω.
    const Eigen::Matrix3cd X = sk * density * sk;
    const Eigen::Matrix3cd& M = dm.M;
    const Eigen::Matrix3cd Md = M.adjoint();
    const Eigen::Matrix3cd order4 = M * M * X + M * X * Md + X * Md * Md;
    P += X * (2.0 / W) + order4 * (2.0 / (3.0 * W * W * W));
    P /= 2.0 * std::numbers::pi;

    // Map ½⟨{v_i, v_j†}⟩ onto mode moments; v₃ = a₂† for two-tone squeezing.
    const std::array<bool, 3> conj{false, false, model.variant == Variant::TwoToneSqueezing};
    Eigen::Matrix3cd s = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (conj[i] == conj[j]) {
                s(i, j) = conj[i] ? std::conj(P(i, j)) : P(i, j);
            } else {
                m(i, j) = conj[i] ? std::conj(P(i, j)) : P(i, j);
            }
        }
    }
    CovarianceState state;
    state.sigma = covariance_from_moments(s, m);
    state.t = std::numeric_limits<double>::infinity();
    return state;
}

}  // namespace optoment
