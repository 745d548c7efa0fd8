// fock.cpp — sector-blocked Lindblad integration and Fock-space observables

#include "optoment/fock.hpp"

#include "optoment/errors.hpp"
#include "optoment/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace optoment {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

std::array<int, 3> charge_weights(Variant v) {
    return v == Variant::TwoToneSqueezing ? std::array<int, 3>{1, 1, -1} : std::array<int, 3>{1, 1, 1};
}

// Sparse block of an operator between two sectors.
struct Block {
    std::size_t source;
    std::size_t target;
    SparseOp op;
};

// Split a global operator with a definite charge shift into sector blocks.
std::vector<Block> restrict_to_sectors(const FockSpace& space, const SparseOp& op) {
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Eigen::Triplet<cd>>> parts;
    for (int c = 0; c < op.outerSize(); ++c) {
        for (SparseOp::InnerIterator it(op, c); it; ++it) {
            const auto [sc, lc] = space.locate(it.col());
            const auto [sr, lr] = space.locate(it.row());
            parts[{sc, sr}].emplace_back(static_cast<int>(lr), static_cast<int>(lc), it.value());
        }
    }
    std::vector<Block> out;
    for (auto& [key, trip] : parts) {
        const auto rows = static_cast<long>(space.sector_states(key.second).size());
        const auto cols = static_cast<long>(space.sector_states(key.first).size());
        SparseOp m(rows, cols);
        m.setFromTriplets(trip.begin(), trip.end());
        m.makeCompressed();
        out.push_back({key.first, key.second, std::move(m)});
    }
    return out;
}

// Per-sector generator pieces for one model.
struct Generator {
    std::vector<SparseOp> h1, h2;    // per sector, diagonal in charge
    std::vector<SparseOp> decay;     // ½ Σ L†L per sector
    std::vector<Block> jumps;        // rate-scaled L_k blocks
};

SparseOp diagonal_block(const std::vector<Block>& blocks, std::size_t s, long n) {
    for (const auto& b : blocks) {
        if (b.source == s) {
            if (b.target != s) throw std::logic_error("fock: Hamiltonian term changes the conserved charge");
            return b.op;
        }
    }
    SparseOp zero(n, n);
    return zero;
}

Generator build_generator(const FockSpace& space, const InterfaceModel& model) {
    const SparseOp& a1 = space.annihilation(0);
    const SparseOp& b = space.annihilation(1);
    const SparseOp& a2 = space.annihilation(2);
    const SparseOp a1d = SparseOp(a1.adjoint());
    const SparseOp bd = SparseOp(b.adjoint());
    const SparseOp a2d = SparseOp(a2.adjoint());

    const SparseOp H1 = SparseOp(a1d * b) + SparseOp(bd * a1);
    SparseOp H2;
    if (model.variant == Variant::TwoToneSqueezing) {
        H2 = I * (SparseOp(a2d * bd) - SparseOp(a2 * b));
    } else {
        H2 = SparseOp(a2d * b) + SparseOp(bd * a2);
    }

    std::vector<SparseOp> jump_ops;
    auto add_jump = [&](double rate, const SparseOp& L) {
        if (rate > 0.0) jump_ops.push_back(std::sqrt(rate) * L);
    };
    add_jump(model.kappa1, a1);
    add_jump(model.kappa2, a2);
    add_jump(model.gamma_m * (model.n_th + 1.0), b);
    add_jump(model.gamma_m * model.n_th, bd);

    const long N = space.dimension();
    SparseOp decay(N, N);
    for (const auto& L : jump_ops) decay += SparseOp(L.adjoint()) * L;
    decay *= 0.5;

    Generator gen;
    const auto h1_blocks = restrict_to_sectors(space, H1);
    const auto h2_blocks = restrict_to_sectors(space, H2);
    const auto decay_blocks = restrict_to_sectors(space, decay);
    for (std::size_t s = 0; s < space.sector_count(); ++s) {
        const auto n = static_cast<long>(space.sector_states(s).size());
        gen.h1.push_back(diagonal_block(h1_blocks, s, n));
        gen.h2.push_back(diagonal_block(h2_blocks, s, n));
        gen.decay.push_back(diagonal_block(decay_blocks, s, n));
    }
    for (const auto& L : jump_ops) {
        auto blocks = restrict_to_sectors(space, L);
        for (auto& blk : blocks) gen.jumps.push_back(std::move(blk));
    }
    return gen;
}

using Blocks = std::vector<Eigen::MatrixXcd>;

void derivative(const Generator& gen, double g1, double g2, const Blocks& rho, Blocks& out) {
    for (std::size_t s = 0; s < rho.size(); ++s) {
        const SparseOp heff = g1 * gen.h1[s] + g2 * gen.h2[s] - I * gen.decay[s];
        // −i(H_eff ρ − ρ H_eff†) = X + X†, X = −i H_eff ρ, for Hermitian ρ.
        const Eigen::MatrixXcd X = -I * (heff * rho[s]);
        out[s] = X + X.adjoint();
    }
    for (const auto& j : gen.jumps) {
        // L ρ L† = L (L ρ)† for Hermitian ρ.
        const Eigen::MatrixXcd Lrho = j.op * rho[j.source];
        out[j.target].noalias() += j.op * Lrho.adjoint();
    }
}

std::array<double, 3> top_populations(const FockSpace& space, const Blocks& blocks) {
    std::array<double, 3> top{0.0, 0.0, 0.0};
    const auto& dims = space.config().dims;
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        const auto& states = space.sector_states(s);
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto n = space.occupations(states[i]);
            const double p = blocks[s](static_cast<long>(i), static_cast<long>(i)).real();
            for (int k = 0; k < 3; ++k) {
                if (n[k] == dims[k] - 1) top[k] += p;
            }
        }
    }
    return top;
}

// Only modes that are actually truncated (d > 1) can leak.
double leakage(const FockSpace& space, const std::array<double, 3>& top) {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        if (space.config().dims[k] > 1) worst = std::max(worst, top[k]);
    }
    return worst;
}

std::shared_ptr<const FockSpace> make_space(const FockConfig& config, Variant variant) {
    return std::make_shared<const FockSpace>(config, variant);
}

FockState empty_state(std::shared_ptr<const FockSpace> space) {
    FockState st;
    st.space = std::move(space);
    for (std::size_t s = 0; s < st.space->sector_count(); ++s) {
        const auto n = static_cast<long>(st.space->sector_states(s).size());
        st.blocks.push_back(Eigen::MatrixXcd::Zero(n, n));
    }
    return st;
}

}  // namespace

// ------------------------------ space ---------------------------------------

void FockConfig::validate() const {
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("FockConfig: dims must be positive");
    }
    if (dimension() > max_dimension) {
        std::ostringstream os;
        os << "FockConfig: total dimension " << dimension() << " exceeds the cap of " << max_dimension;
        throw std::invalid_argument(os.str());
    }
}

FockConfig FockConfig::for_occupations(const std::array<double, 3>& nbar, double tail, int min_dim) {
    FockConfig config;
    for (int k = 0; k < 3; ++k) {
        const double n = std::max(nbar[k], 0.0);
        int d = std::max(min_dim, 1);
        while (n > 0.0 && std::pow(n / (n + 1.0), d - 1) / (n + 1.0) >= tail && d < 200) ++d;
        config.dims[k] = d;
    }
    return config;
}

FockSpace::FockSpace(const FockConfig& config, Variant variant)
    : config_(config), variant_(variant), weights_(charge_weights(variant)) {
    config_.validate();
    const long N = dimension();
    std::map<int, std::size_t> by_charge;
    for (long g = 0; g < N; ++g) by_charge.try_emplace(charge_of(g), 0);
    std::size_t next = 0;
    for (auto& [q, s] : by_charge) {
        s = next++;
        charges_.push_back(q);
    }
    sectors_.resize(charges_.size());
    where_.resize(static_cast<std::size_t>(N));
    for (long g = 0; g < N; ++g) {
        const std::size_t s = by_charge.at(charge_of(g));
        where_[static_cast<std::size_t>(g)] = {s, static_cast<long>(sectors_[s].size())};
        sectors_[s].push_back(g);
    }

    for (int mode = 0; mode < 3; ++mode) {
        std::vector<Eigen::Triplet<cd>> trip;
        for (long g = 0; g < N; ++g) {
            auto n = occupations(g);
            if (n[mode] == 0) continue;
            const double amp = std::sqrt(static_cast<double>(n[mode]));
            --n[mode];
            trip.emplace_back(static_cast<int>(index(n[0], n[1], n[2])), static_cast<int>(g), amp);
        }
        ops_[mode].resize(N, N);
        ops_[mode].setFromTriplets(trip.begin(), trip.end());
        ops_[mode].makeCompressed();
    }
}

long FockSpace::index(int n1, int nm, int n2) const {
    const auto& d = config_.dims;
    if (n1 < 0 || n1 >= d[0] || nm < 0 || nm >= d[1] || n2 < 0 || n2 >= d[2]) {
        throw std::out_of_range("FockSpace::index: occupation outside the truncation");
    }
    return (static_cast<long>(n1) * d[1] + nm) * d[2] + n2;
}

std::array<int, 3> FockSpace::occupations(long global) const {
    const auto& d = config_.dims;
    const int n2 = static_cast<int>(global % d[2]);
    const long rest = global / d[2];
    return {static_cast<int>(rest / d[1]), static_cast<int>(rest % d[1]), n2};
}

int FockSpace::charge_of(long global) const {
    const auto n = occupations(global);
    return weights_[0] * n[0] + weights_[1] * n[1] + weights_[2] * n[2];
}

std::pair<std::size_t, long> FockSpace::locate(long global) const {
    return where_.at(static_cast<std::size_t>(global));
}

std::size_t FockSpace::sector_of_charge(int q) const {
    const auto it = std::lower_bound(charges_.begin(), charges_.end(), q);
    if (it == charges_.end() || *it != q) return sectors_.size();
    return static_cast<std::size_t>(it - charges_.begin());
}

// ------------------------------ states --------------------------------------

namespace {

std::vector<double> thermal_populations(int levels, double n0) {
    std::vector<double> pop(static_cast<std::size_t>(levels));
    double total = 0.0;
    for (int k = 0; k < levels; ++k) {
        pop[static_cast<std::size_t>(k)] = n0 > 0.0 ? std::pow(n0 / (n0 + 1.0), k) / (n0 + 1.0) : (k == 0 ? 1.0 : 0.0);
        total += pop[static_cast<std::size_t>(k)];
    }
    for (double& p : pop) p /= total;
    return pop;
}

FockState cavities_with_thermal_mechanics(const FockConfig& config, const InterfaceModel& model, int n1, int n2) {
    model.validate();
    FockState st = empty_state(make_space(config, model.variant));
    const auto pop = thermal_populations(config.dims[1], model.n_0);
    for (int k = 0; k < config.dims[1]; ++k) {
        const auto [s, l] = st.space->locate(st.space->index(n1, k, n2));
        st.blocks[s](l, l) = pop[static_cast<std::size_t>(k)];
    }
    return st;
}

}  // namespace

FockState FockState::initial(const FockConfig& config, const InterfaceModel& model) {
    return cavities_with_thermal_mechanics(config, model, 0, 0);
}

FockState FockState::single_photon(const FockConfig& config, const InterfaceModel& model, int cavity) {
    if (cavity != 0 && cavity != 2) throw std::invalid_argument("FockState::single_photon: cavity must be 0 or 2");
    return cavities_with_thermal_mechanics(config, model, cavity == 0 ? 1 : 0, cavity == 2 ? 1 : 0);
}

FockState FockState::number_state(const FockConfig& config, Variant variant, int n1, int nm, int n2) {
    FockState st = empty_state(make_space(config, variant));
    const auto [s, l] = st.space->locate(st.space->index(n1, nm, n2));
    st.blocks[s](l, l) = 1.0;
    return st;
}

FockState FockState::from_ket(const FockConfig& config, Variant variant, const Eigen::VectorXcd& ket) {
    FockState st = empty_state(make_space(config, variant));
    if (ket.size() != st.space->dimension()) throw std::invalid_argument("FockState::from_ket: wrong dimension");
    const double norm = ket.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("FockState::from_ket: zero ket");
    std::size_t sector = st.space->sector_count();
    for (long g = 0; g < ket.size(); ++g) {
        if (ket[g] == cd{}) continue;
        const std::size_t s = st.space->locate(g).first;
        if (sector != st.space->sector_count() && s != sector) {
            throw std::invalid_argument("FockState::from_ket: ket mixes conserved-charge sectors");
        }
        sector = s;
    }
    const auto& states = st.space->sector_states(sector);
    Eigen::VectorXcd local(static_cast<long>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i) local[static_cast<long>(i)] = ket[states[i]] / norm;
    st.blocks[sector] = local * local.adjoint();
    return st;
}

double FockState::trace() const {
    double tr = 0.0;
    for (const auto& b : blocks) tr += b.trace().real();
    return tr;
}

std::complex<double> FockState::expectation(const SparseOp& op) const {
    // tr(ρ O) = Σ O_rc ρ_cr; ρ is nonzero only inside sectors.
    cd acc{};
    for (int c = 0; c < op.outerSize(); ++c) {
        const auto [sc, lc] = space->locate(c);
        for (SparseOp::InnerIterator it(op, c); it; ++it) {
            const auto [sr, lr] = space->locate(it.row());
            if (sr != sc) continue;
            acc += it.value() * blocks[sc](lc, lr);
        }
    }
    return acc;
}

Eigen::MatrixXcd FockState::dense() const {
    const long N = space->dimension();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t s = 0; s < blocks.size(); ++s) {
        const auto& states = space->sector_states(s);
        for (std::size_t i = 0; i < states.size(); ++i) {
            for (std::size_t j = 0; j < states.size(); ++j) {
                rho(states[i], states[j]) = blocks[s](static_cast<long>(i), static_cast<long>(j));
            }
        }
    }
    return rho;
}

std::array<double, 3> FockState::top_level_population() const { return top_populations(*space, blocks); }

bool FockState::is_physical(double tol) const {
    if (std::abs(trace() - 1.0) > 1e-8) return false;
    for (const auto& b : blocks) {
        if (b.size() == 0) continue;
        if ((b - b.adjoint()).cwiseAbs().maxCoeff() > 1e-10) return false;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol) return false;
    }
    return true;
}

// ------------------------------ evolution -----------------------------------

FockEvolution lindblad_evolve(const FockState& state, const InterfaceModel& model,
                              const CouplingSchedule& schedule, const std::vector<double>& t_grid,
                              const FockOptions& options) {
    model.validate();
    if (!state.space) throw std::invalid_argument("lindblad_evolve: state has no Fock space");
    if (state.space->variant() != model.variant) {
        throw std::invalid_argument("lindblad_evolve: state sectors were built for a different variant");
    }
    if (schedule.requires_beamsplitter() && model.variant != Variant::DoubleBeamsplitter) {
        throw std::invalid_argument(
            "lindblad_evolve: a beamsplitter-swap schedule needs the double-beamsplitter variant");
    }
    if (t_grid.empty()) throw std::invalid_argument("lindblad_evolve: empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("lindblad_evolve: time grid must increase");
    }
    if (std::abs(t_grid.front() - state.t) > 1e-12 * std::max(1.0, std::abs(state.t))) {
        throw std::invalid_argument("lindblad_evolve: time grid must start at the state's time");
    }

    const FockSpace& space = *state.space;
    const Generator gen = build_generator(space, model);
    const auto& d = space.config().dims;
    const double g_max = std::abs(schedule.max_coupling(t_grid.front(), t_grid.back()));
    const double lambda = g_max * (std::sqrt(double(d[0]) * d[1]) + std::sqrt(double(d[2]) * d[1])) +
                          0.5 * (model.kappa1 * (d[0] - 1) + model.kappa2 * (d[2] - 1) +
                                 model.gamma_m * (2.0 * model.n_th + 1.0) * d[1]);
    const double h_max = lambda > 0.0 ? options.step_factor / lambda : std::numeric_limits<double>::infinity();

    FockEvolution result;
    Blocks rho = state.blocks;
    Blocks k1 = rho, k2 = rho, k3 = rho, k4 = rho, tmp = rho;

    auto monitor = [&](double t) {
        const double top = leakage(space, top_populations(space, rho));
        result.max_top_population = std::max(result.max_top_population, top);
        if (top >= options.leakage_threshold && result.truncation_reliable) {
            result.truncation_reliable = false;
            result.leakage_time = t;
            if (options.throw_on_leakage) {
                std::ostringstream os;
                os << "lindblad_evolve: top Fock level population " << top << " at t = " << t;
                throw TruncationError(os.str());
            }
        }
    };
    auto stage = [&](const Blocks& base, const Blocks& k, double scale, Blocks& out) {
        for (std::size_t s = 0; s < base.size(); ++s) out[s] = base[s] + scale * k[s];
    };

    monitor(t_grid.front());
    FockState snap{state.space, rho, t_grid.front()};
    result.states.push_back(snap);
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double t0 = t_grid[i - 1];
        const double dt = t_grid[i] - t0;
        const auto steps = static_cast<long>(std::max(1.0, std::ceil(dt / h_max)));
        const double h = dt / static_cast<double>(steps);
        for (long k = 0; k < steps; ++k) {
            const double t = t0 + static_cast<double>(k) * h;
            const auto [a1, b1] = schedule.couplings(t);
            const auto [a2, b2] = schedule.couplings(t + 0.5 * h);
            const auto [a3, b3] = schedule.couplings(t + h);
            derivative(gen, a1, b1, rho, k1);
            stage(rho, k1, 0.5 * h, tmp);
            derivative(gen, a2, b2, tmp, k2);
            stage(rho, k2, 0.5 * h, tmp);
            derivative(gen, a2, b2, tmp, k3);
            stage(rho, k3, h, tmp);
            derivative(gen, a3, b3, tmp, k4);
            double worst = 0.0;
            for (std::size_t s = 0; s < rho.size(); ++s) {
                rho[s] += (h / 6.0) * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
                rho[s] = 0.5 * (rho[s] + rho[s].adjoint()).eval();
                if (rho[s].size() > 0) worst = std::max(worst, rho[s].cwiseAbs().maxCoeff());
            }
            if (!std::isfinite(worst) || worst > options.overflow_guard) {
                std::ostringstream os;
                os << "lindblad_evolve: density matrix diverged at t = " << t + h;
                throw DivergenceError(os.str(), t + h);
            }
            monitor(t + h);
        }
        result.states.push_back(FockState{state.space, rho, t_grid[i]});
    }
    return result;
}

TransferCheck beamsplitter_transfer_check(int n, double g0, double step_factor) {
    if (n < 1) throw std::invalid_argument("beamsplitter_transfer_check: n must be >= 1");
    const CouplingSchedule schedule = CouplingSchedule::resonant_swap(g0, n);
    const double t_f = schedule.t_final();
    const auto steps = static_cast<long>(std::ceil(t_f * g0 / step_factor));
    const double h = t_f / static_cast<double>(steps);

    // Single-excitation amplitudes on (|1₁⟩, |1_m⟩, |1₂⟩); i dψ/dt = H ψ.
    auto rhs = [&](double t, const Eigen::Matrix3cd& psi) -> Eigen::Matrix3cd {
        const auto [g1, g2] = schedule.couplings(t);
        Eigen::Matrix3d H;
        H << 0.0, g1, 0.0, g1, 0.0, g2, 0.0, g2, 0.0;
        return -I * (H.cast<cd>() * psi);
    };
    Eigen::Matrix3cd U = Eigen::Matrix3cd::Identity();
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const Eigen::Matrix3cd q1 = rhs(t, U);
        const Eigen::Matrix3cd q2 = rhs(t + 0.5 * h, U + 0.5 * h * q1);
        const Eigen::Matrix3cd q3 = rhs(t + 0.5 * h, U + 0.5 * h * q2);
        const Eigen::Matrix3cd q4 = rhs(t + h, U + h * q3);
        U += (h / 6.0) * (q1 + 2.0 * q2 + 2.0 * q3 + q4);
    }
    // a_j(t_f) = Σ_k U_jk a_k(0) on the single-excitation block.
    TransferCheck out;
    out.transfer << U(0, 0), U(0, 2), U(2, 0), U(2, 2);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    out.expected << 1.0, -sign, 1.0, sign;
    out.expected /= std::numbers::sqrt2;
    out.deviation = (out.transfer - out.expected.cast<cd>()).cwiseAbs().maxCoeff();
    return out;
}

// ------------------------------ observables ---------------------------------

FockCovariance covariance_from_fock(const FockState& state, double leakage_threshold) {
    const FockSpace& space = *state.space;
    std::array<const SparseOp*, 3> c{&space.annihilation(0), &space.annihilation(1), &space.annihilation(2)};
    std::array<cd, 3> mean{};
    for (int i = 0; i < 3; ++i) mean[i] = state.expectation(*c[i]);

    Eigen::Matrix3cd s = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    for (int i = 0; i < 3; ++i) {
        const SparseOp ci_dag = SparseOp(c[i]->adjoint());
        const SparseOp number = ci_dag * (*c[i]);
        s(i, i) = state.expectation(number).real() + 0.5 - std::norm(mean[i]);
        for (int j = 0; j < 3; ++j) {
            if (j != i) {
                const SparseOp cross = (*c[i]) * SparseOp(c[j]->adjoint());
                s(i, j) = state.expectation(cross) - mean[i] * std::conj(mean[j]);
            }
            if (j >= i) {
                const SparseOp pair = (*c[i]) * (*c[j]);
                m(i, j) = state.expectation(pair) - mean[i] * mean[j];
                m(j, i) = m(i, j);
            }
        }
    }
    FockCovariance out;
    out.state.sigma = covariance_from_moments(s, m);
    for (int i = 0; i < 3; ++i) {
        out.state.mean[2 * i] = std::numbers::sqrt2 * mean[i].real();
        out.state.mean[2 * i + 1] = std::numbers::sqrt2 * mean[i].imag();
    }
    out.state.t = state.t;
    out.reliable = leakage(space, state.top_level_population()) < leakage_threshold;
    return out;
}

Eigen::MatrixXcd reduced_cavity_state(const FockState& state) {
    const FockSpace& space = *state.space;
    const auto& d = space.config().dims;
    const long dc = static_cast<long>(d[0]) * d[2];
    Eigen::MatrixXcd rc = Eigen::MatrixXcd::Zero(dc, dc);
    for (std::size_t s = 0; s < state.blocks.size(); ++s) {
        const auto& states = space.sector_states(s);
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto ni = space.occupations(states[i]);
            for (std::size_t j = 0; j < states.size(); ++j) {
                const auto nj = space.occupations(states[j]);
                if (ni[1] != nj[1]) continue;
                rc(ni[0] * d[2] + ni[2], nj[0] * d[2] + nj[2]) +=
                    state.blocks[s](static_cast<long>(i), static_cast<long>(j));
            }
        }
    }
    return rc;
}

DiscreteEntanglement discrete_entanglement(const FockState& state) {
    const auto& d = state.space->config().dims;
    const Eigen::MatrixXcd rc = reduced_cavity_state(state);
    const long d1 = d[0], d2 = d[2];
    Eigen::MatrixXcd pt(rc.rows(), rc.cols());
    for (long i1 = 0; i1 < d1; ++i1)
        for (long i2 = 0; i2 < d2; ++i2)
            for (long j1 = 0; j1 < d1; ++j1)
                for (long j2 = 0; j2 < d2; ++j2) pt(i1 * d2 + j2, j1 * d2 + i2) = rc(i1 * d2 + i2, j1 * d2 + j2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (pt + pt.adjoint()), Eigen::EigenvaluesOnly);
    DiscreteEntanglement out;
    out.log_negativity = std::max(0.0, std::log2(es.eigenvalues().cwiseAbs().sum()));
    if (d1 >= 2 && d2 >= 2) {
        const long e10 = 1 * d2 + 0;
        const long e01 = 0 * d2 + 1;
        auto fid = [&](double sign) {
            const cd v = rc(e10, e10) + rc(e01, e01) + sign * (rc(e10, e01) + rc(e01, e10));
            return 0.5 * v.real();
        };
        out.fidelity_plus = fid(1.0);
        out.fidelity_minus = fid(-1.0);
    }
    return out;
}

}  // namespace optoment
