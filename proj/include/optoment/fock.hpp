// fock.hpp — truncated Fock-space Lindblad simulator for the three-mode
// interface, used as a brute-force oracle for the Gaussian path
//
// Both Hamiltonians conserve a weighted excitation number Q = Σ w_k n_k,
// w = (1, 1, −1) for two-tone squeezing and (1, 1, 1) for the double
// beamsplitter. Every jump operator shifts Q by ±1 on both sides of ρ, so a
// state that starts block-diagonal in Q stays block-diagonal. ρ is stored as
// one dense block per Q sector.

#pragma once

#include "optoment/gaussian.hpp"
#include "optoment/model.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <memory>
#include <vector>

namespace optoment {

using SparseOp = Eigen::SparseMatrix<std::complex<double>>;

struct FockConfig {
    static constexpr long max_dimension = 20000;

    std::array<int, 3> dims{12, 12, 12};  // (cavity 1, mechanics, cavity 2)

    long dimension() const { return static_cast<long>(dims[0]) * dims[1] * dims[2]; }
    // Smallest cutoffs whose thermal tail at mean occupation n̄_k, i.e. the
    // top-level population n̄^(d−1)/(n̄+1)^d, stays below `tail`.
    static FockConfig for_occupations(const std::array<double, 3>& nbar, double tail = 2e-5, int min_dim = 3);
    // Throws std::invalid_argument on non-positive dims or an oversize space.
    void validate() const;
};

class FockSpace {
public:
    FockSpace(const FockConfig& config, Variant variant);

    const FockConfig& config() const noexcept { return config_; }
    Variant variant() const noexcept { return variant_; }
    long dimension() const noexcept { return config_.dimension(); }

    // Global index of |n₁, n_m, n₂⟩.
    long index(int n1, int nm, int n2) const;
    std::array<int, 3> occupations(long global) const;

    int charge_of(long global) const;
    std::size_t sector_count() const noexcept { return sectors_.size(); }
    int sector_charge(std::size_t s) const { return charges_[s]; }
    const std::vector<long>& sector_states(std::size_t s) const { return sectors_[s]; }
    // Sector and position within it; sector_count() if the charge is absent.
    std::pair<std::size_t, long> locate(long global) const;
    std::size_t sector_of_charge(int q) const;

    // Truncated annihilation operator for mode 0, 1 or 2 on the full space.
    const SparseOp& annihilation(int mode) const { return ops_[mode]; }

private:
    FockConfig config_;
    Variant variant_;
    std::array<int, 3> weights_{};
    std::vector<std::vector<long>> sectors_;
    std::vector<int> charges_;
    std::vector<std::pair<std::size_t, long>> where_;
    std::array<SparseOp, 3> ops_;
};

struct FockState {
    std::shared_ptr<const FockSpace> space;
    std::vector<Eigen::MatrixXcd> blocks;  // one per sector of `space`
    double t{0.0};

    // Vacuum cavities, thermal mechanics with occupation model.n_0 (truncated
    // and renormalized).
    static FockState initial(const FockConfig& config, const InterfaceModel& model);
    // One photon in `cavity` (0 or 2), the other cavity empty, thermal
    // mechanics at model.n_0.
    static FockState single_photon(const FockConfig& config, const InterfaceModel& model, int cavity);
    static FockState number_state(const FockConfig& config, Variant variant, int n1, int nm, int n2);
    // Pure state; throws std::invalid_argument when the ket mixes sectors.
    static FockState from_ket(const FockConfig& config, Variant variant, const Eigen::VectorXcd& ket);

    double trace() const;
    std::complex<double> expectation(const SparseOp& op) const;
    Eigen::MatrixXcd dense() const;
    // Population of each mode's highest retained level.
    std::array<double, 3> top_level_population() const;
    // Trace 1 ± 1e−8, Hermitian to 1e−10, eigenvalues ≥ −tol.
    bool is_physical(double tol = 1e-8) const;
};

struct FockOptions {
    // h ≤ step_factor / Λ, Λ a bound on the generator's largest rate.
    double step_factor{1.0};
    double leakage_threshold{1e-4};
    double overflow_guard{1e12};
    // Throw TruncationError at the first leaking step instead of flagging.
    bool throw_on_leakage{false};
};

struct FockEvolution {
    std::vector<FockState> states;  // one per t_grid point
    bool truncation_reliable{true};
    double max_top_population{0.0};
    double leakage_time{0.0};  // first time above threshold, if any
};

// Fixed-step RK4 on dρ/dt = −i[H(t), ρ] + Σ 𝒟[L_k]ρ with jumps √κ₁a₁, √κ₂a₂,
// √(γ(n_th+1)) b and √(γ n_th) b†.
FockEvolution lindblad_evolve(const FockState& state, const InterfaceModel& model,
                              const CouplingSchedule& schedule, const std::vector<double>& t_grid,
                              const FockOptions& options = {});

struct TransferCheck {
    Eigen::Matrix2cd transfer;  // (a₁, a₂) at t_f in terms of (a₁, a₂) at 0
    Eigen::Matrix2d expected;   // (1/√2)[[1, −(−1)ⁿ], [1, (−1)ⁿ]]
    double deviation{0.0};      // max-abs entry of transfer − expected
};

// Zero-damping swap λ = g₀/4n, t_f = π/4λ, propagated on the single-excitation
// subspace.
TransferCheck beamsplitter_transfer_check(int n, double g0 = 1.0, double step_factor = 1e-3);

struct FockCovariance {
    CovarianceState state;
    bool reliable{true};
};

// First and second quadrature moments of ρ. Diagonal terms use ⟨a†a⟩ + ½,
// which is exact even with a truncated commutator.
FockCovariance covariance_from_fock(const FockState& state, double leakage_threshold = 1e-4);

struct DiscreteEntanglement {
    double log_negativity{0.0};  // log₂‖ρ_c^Γ‖₁ of the two-cavity state
    double fidelity_plus{0.0};   // with (|1₁0₂⟩ + |0₁1₂⟩)/√2
    double fidelity_minus{0.0};  // with (|1₁0₂⟩ − |0₁1₂⟩)/√2

    double fidelity(int sign) const { return sign >= 0 ? fidelity_plus : fidelity_minus; }
};

DiscreteEntanglement discrete_entanglement(const FockState& state);

// Two-cavity density matrix with the mechanics traced out, basis n₁·d₂ + n₂.
Eigen::MatrixXcd reduced_cavity_state(const FockState& state);

}  // namespace optoment
