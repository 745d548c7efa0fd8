// runner.cpp — experiment dispatch, CSV/manifest output and exit codes

#include "optoment/runner.hpp"

#include "optoment/errors.hpp"
#include "optoment/fock.hpp"
#include "optoment/gaussian.hpp"
#include "optoment/peaks.hpp"
#include "optoment/presets.hpp"
#include "optoment/spectra.hpp"

#include <json.hpp>
#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace optoment {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
const double log2e = std::numbers::log2e;

using Summary = std::vector<std::pair<std::string, double>>;

struct EntryResult {
    Table table;
    Summary summary;
    bool truncation_reliable{true};
};

double occupation(const Matrix6d& sigma, int mode) {
    return 0.5 * (sigma(2 * mode, 2 * mode) + sigma(2 * mode + 1, 2 * mode + 1)) - 0.5;
}

std::string key_n(const char* base, int n) { return std::string(base) + std::to_string(n); }

// ------------------------------ time series ---------------------------------

struct PeakStats {
    double t_peak{nan};
    double height{nan};
    double offset_steps{nan};
    double fwhm{nan};
};

PeakStats peak_near(const std::vector<double>& t, const std::vector<double>& y, double t_n, double half_window) {
    PeakStats out;
    const auto best = argmax_in_window(t, y, t_n - half_window, t_n + half_window);
    if (!best) return out;
    const std::size_t i = climb_to_peak(y, *best);
    if (std::abs(t[i] - t_n) > half_window) return out;  // no maximum inside the window
    out.t_peak = t[i];
    out.height = y[i];
    const double dt = t.size() > 1 ? t[1] - t[0] : 1.0;
    out.offset_steps = (t[i] - t_n) / dt;
    if (y[i] > 0.0) {
        if (const auto w = full_width_half_max(t, y, i)) out.fwhm = *w;
    }
    return out;
}

Matrix4d ideal_cavity_covariance(const ResolvedExperiment& e, int n) {
    Matrix4d S;
    if (e.schedule.type == ScheduleType::Adiabatic) {
        S = analytic_transfer_adiabatic(e.schedule.lambda * interference_time(e.g0, n), n);
    } else {
        S = analytic_transfer_constant(e.model.squeezing(), n);
    }
    return 0.5 * S * S.transpose();
}

EntryResult compute_time_series(const ResolvedExperiment& e) {
    const CouplingSchedule schedule = e.make_schedule();
    const auto grid = linear_grid(schedule.t_final(), static_cast<std::size_t>(e.grid.points));
    const auto states = evolve(initial_state(e.model), e.model, schedule, grid);

    EntryResult out;
    out.table.columns = {"t", "g1", "g2", "E_N", "n_cav1", "n_mech", "n_cav2"};
    std::vector<double> en;
    en.reserve(states.size());
    for (const auto& st : states) {
        const auto [g1, g2] = schedule.couplings(st.t);
        const double v = log_negativity(st);
        en.push_back(v);
        out.table.rows.push_back({st.t, g1, g2, v, occupation(st.sigma, 0), occupation(st.sigma, 1),
                                  occupation(st.sigma, 2)});
    }

    // Exact interference times get their own short run.
    std::vector<double> exact{0.0};
    for (int n : e.grid.peaks) exact.push_back(interference_time(e.g0, n));
    std::sort(exact.begin(), exact.end());
    exact.erase(std::unique(exact.begin(), exact.end()), exact.end());
    const auto at_tn = evolve(initial_state(e.model), e.model, schedule, exact);

    const bool squeezing_schedule = schedule.kind().index() != 2;
    for (int n : e.grid.peaks) {
        const double t_n = interference_time(e.g0, n);
        const auto it = std::find(exact.begin(), exact.end(), t_n);
        const CovarianceState& st = at_tn[static_cast<std::size_t>(it - exact.begin())];
        const PeakStats p = peak_near(grid, en, t_n, 0.3 / e.g0);
        out.summary.emplace_back(key_n("t_", n), t_n);
        out.summary.emplace_back(key_n("E_N_at_t", n), log_negativity(st));
        out.summary.emplace_back(key_n("peak_t", n), p.t_peak);
        out.summary.emplace_back(key_n("peak_E_N", n), p.height);
        out.summary.emplace_back(key_n("peak_offset_steps", n), p.offset_steps);
        out.summary.emplace_back(key_n("fwhm", n), p.fwhm);
        if (squeezing_schedule && e.model.variant == Variant::TwoToneSqueezing) {
            const Matrix4d ideal = ideal_cavity_covariance(e, n);
            out.summary.emplace_back(key_n("ideal_E_N_t", n), log_negativity(ideal));
            out.summary.emplace_back(key_n("ideal_cov_dev_t", n), (st.cavity_block() - ideal).cwiseAbs().maxCoeff());
        }
    }
    return out;
}

// ------------------------------ spectrum ------------------------------------

EntryResult compute_spectrum(const ResolvedExperiment& e) {
    const double g0 = e.g0;
    const FilterSpec filter = FilterSpec::on_lattice(e.filter.delta_omega * g0, e.filter.omega_max * g0);
    const SpectralResult spectrum = output_entanglement_spectrum(e.model, filter);
    const auto maxima = local_maxima(spectrum.E_N_out);

    EntryResult out;
    out.table.columns = {"omega_n", "omega_over_g0", "E_N", "width_estimate", "dark_amp_abs", "bright_amp_abs"};
    for (std::size_t i = 0; i < spectrum.omega.size(); ++i) {
        double width = nan;
        if (std::find(maxima.begin(), maxima.end(), i) != maxima.end()) {
            if (const auto w = full_width_half_max(spectrum.omega, spectrum.E_N_out, i)) width = *w;
        }
        const ModeExcitation ex = dark_mode_excitation(e.model, spectrum.omega[i]);
        out.table.rows.push_back({spectrum.omega[i], spectrum.omega[i] / g0, spectrum.E_N_out[i], width,
                                  ex.dark_amp_per_input.norm(), ex.bright_sym_amp_per_input.norm()});
    }

    const EigenmodeReport modes = eigenmode_analysis(e.model);
    out.summary.emplace_back("delta_lambda1", modes.delta_lambda1);
    out.summary.emplace_back("delta_lambda2", modes.delta_lambda2);
    out.summary.emplace_back("local_maxima", static_cast<double>(maxima.size()));
    for (std::size_t k = 0; k < maxima.size(); ++k) {
        out.summary.emplace_back("max" + std::to_string(k + 1) + "_omega_over_g0", spectrum.omega[maxima[k]] / g0);
    }
    out.summary.emplace_back("E_N_stationary_internal", log_negativity(stationary_covariance(e.model)));

    std::vector<double> widths{e.filter.delta_omega};
    widths.insert(widths.end(), e.filter.sensitivity.begin(), e.filter.sensitivity.end());
    for (double p : e.filter.probes) {
        for (double dw : widths) {
            FilterSpec f;
            f.delta_omega = dw * g0;
            std::ostringstream name;
            name << "E_N_probe" << format_number(p) << "_dw" << format_number(dw);
            out.summary.emplace_back(name.str(), log_negativity(filtered_output_covariance(e.model, f, p * g0)));
        }
    }
    return out;
}

// ------------------------------ stationary ----------------------------------

double peak_in_window(const InterfaceModel& model, const CouplingSchedule& schedule, double g0, int n, int points) {
    const double t_end = (n + 1) * std::numbers::pi / g0;
    const auto grid = linear_grid(t_end, static_cast<std::size_t>(points));
    const auto series = entanglement_vs_time(model, schedule, grid);
    const double t_n = interference_time(g0, n);
    double best = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid[i] - t_n) <= 0.3 / g0) best = std::max(best, series.E_N[i]);
    }
    return best;
}

EntryResult compute_stationary(const ResolvedExperiment& e) {
    const auto report = stability_check(e.model);
    const CovarianceState st = stationary_covariance(e.model);
    EntryResult out;
    out.table.columns = {"row", "sigma_0", "sigma_1", "sigma_2", "sigma_3", "sigma_4", "sigma_5"};
    for (int i = 0; i < 6; ++i) {
        out.table.rows.push_back({double(i), st.sigma(i, 0), st.sigma(i, 1), st.sigma(i, 2), st.sigma(i, 3),
                                  st.sigma(i, 4), st.sigma(i, 5)});
    }
    out.summary.emplace_back("stable", report.stable ? 1.0 : 0.0);
    out.summary.emplace_back("margin", report.margin);
    out.summary.emplace_back("E_N_stationary", log_negativity(st));
    if (e.stationary.compare_schemes) {
        const double g0 = e.g0;
        const int n = e.stationary.adiabatic_n;
        const double lambda = e.stationary.adiabatic_target_r / interference_time(g0, n);
        const auto constant = CouplingSchedule::constant(e.model.g1, e.model.g2, 2.0 * std::numbers::pi / g0);
        const auto adiabatic = CouplingSchedule::adiabatic_squeeze(g0, lambda, (n + 1) * std::numbers::pi / g0);
        InterfaceModel start = e.model;
        start.g1 = g0;
        start.g2 = 0.0;
        out.summary.emplace_back("peak_E_N_constant_t1", peak_in_window(e.model, constant, g0, 1, e.grid.points));
        out.summary.emplace_back(key_n("peak_E_N_adiabatic_t", n), peak_in_window(start, adiabatic, g0, n, e.grid.points));
    }
    if (e.stationary.parseval) {
        const CovarianceState spec = spectral_internal_covariance(e.model, e.stationary.parseval_window);
        const Matrix6d diff = spec.sigma - st.sigma;
        const double scale = st.sigma.cwiseAbs().maxCoeff();
        double rel = 0.0;
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                rel = std::max(rel, std::abs(diff(i, j)) / std::max(std::abs(st.sigma(i, j)), 1e-3 * scale));
            }
        }
        out.summary.emplace_back("parseval_max_abs_error", diff.cwiseAbs().maxCoeff());
        out.summary.emplace_back("parseval_max_rel_error", rel);
    }
    return out;
}

// ------------------------------ eigenmodes ----------------------------------

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
}

EntryResult compute_eigenmodes(const ResolvedExperiment& e) {
    EntryResult out;
    out.table.columns = {"r",      "g1",          "g2",        "stable", "margin", "delta_lambda1", "delta_lambda2",
                         "re_bright_plus", "re_bright_minus", "mechanical_leakage", "classified"};
    double last_stable_r = nan;
    for (double r : linspace(e.scan.r_min, e.scan.r_max, e.scan.r_points)) {
        InterfaceModel m = e.model.with_couplings(e.g0 * std::cosh(r), e.g0 * std::sinh(r));
        const auto report = stability_check(m);
        if (report.stable) last_stable_r = r;
        std::vector<double> row{r, m.g1, m.g2, report.stable ? 1.0 : 0.0, report.margin};
        try {
            const EigenmodeReport modes = eigenmode_analysis(m);
            row.insert(row.end(), {modes.delta_lambda1, modes.delta_lambda2, modes.eigenvalues[1].real(),
                                   modes.eigenvalues[2].real(), modes.mechanical_leakage, 1.0});
        } catch (const ClassificationError&) {
            row.insert(row.end(), {nan, nan, nan, nan, nan, 0.0});
        }
        out.table.rows.push_back(std::move(row));
    }
    out.summary.emplace_back("points", static_cast<double>(out.table.rows.size()));
    out.summary.emplace_back("largest_stable_r", last_stable_r);
    return out;
}

// ------------------------------ stability scan ------------------------------

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a * std::pow(b / a, double(i) / (n - 1)));
    return out;
}

EntryResult compute_stability_scan(const ResolvedExperiment& e) {
    EntryResult out;
    out.table.columns = {"g2_over_g1", "kappa_ratio", "g1", "g2", "kappa1", "kappa2", "stable", "margin",
                         "approx_holds", "in_band", "agree"};
    int outside = 0, agree_outside = 0;
    const double g1 = e.model.g1;
    for (double q : linspace(e.scan.ratio_min, e.scan.ratio_max, e.scan.ratio_points)) {
        for (double kr : geomspace(e.scan.kappa_ratio_min, e.scan.kappa_ratio_max, e.scan.kappa_ratio_points)) {
            InterfaceModel m = e.model.with_couplings(g1, q * g1);
            m.kappa2 = kr * m.kappa1;
            const auto rep = stability_check(m);
            const double lhs = 1.0 / (q * q);
            const double rhs = std::max(m.kappa2 / m.kappa1, m.kappa1 / m.kappa2);
            const bool in_band = std::abs(lhs - rhs) < e.scan.band;
            const bool agree = rep.stable == rep.approx_condition_holds;
            if (!in_band) {
                ++outside;
                if (agree) ++agree_outside;
            }
            out.table.rows.push_back({q, kr, m.g1, m.g2, m.kappa1, m.kappa2, rep.stable ? 1.0 : 0.0, rep.margin,
                                      rep.approx_condition_holds ? 1.0 : 0.0, in_band ? 1.0 : 0.0, agree ? 1.0 : 0.0});
        }
    }
    out.summary.emplace_back("points", static_cast<double>(out.table.rows.size()));
    out.summary.emplace_back("points_outside_band", outside);
    out.summary.emplace_back("agreements_outside_band", agree_outside);
    out.summary.emplace_back("agreement_fraction", outside > 0 ? double(agree_outside) / outside : nan);
    return out;
}

// ------------------------------ discrete ------------------------------------

EntryResult compute_discrete(const ResolvedExperiment& e, bool strict) {
    EntryResult out;
    out.table.columns = {"n",           "lambda",      "t_final",     "transfer_deviation", "fidelity_from_10",
                         "fidelity_from_01", "E_N_from_10", "E_N_from_01", "max_top_population", "truncation_reliable"};
    FockConfig config;
    config.dims = e.discrete.dims;
    FockOptions opts;
    opts.throw_on_leakage = strict;
    double best = 0.0, best_n = nan;
    for (int n : e.discrete.swap_n) {
        const TransferCheck tc = beamsplitter_transfer_check(n, e.g0);
        const CouplingSchedule schedule = CouplingSchedule::resonant_swap(e.g0, n);
        const std::vector<double> grid{0.0, schedule.t_final()};
        const InterfaceModel& m = e.model;
        const auto run10 = lindblad_evolve(FockState::single_photon(config, m, 0), m, schedule, grid, opts);
        const auto run01 = lindblad_evolve(FockState::single_photon(config, m, 2), m, schedule, grid, opts);
        const auto d10 = discrete_entanglement(run10.states.back());
        const auto d01 = discrete_entanglement(run01.states.back());
        const bool reliable = run10.truncation_reliable && run01.truncation_reliable;
        out.truncation_reliable = out.truncation_reliable && reliable;
        const double f10 = d10.fidelity(+1);
        const double f01 = d01.fidelity(-1);
        if (std::min(f10, f01) > best) {
            best = std::min(f10, f01);
            best_n = n;
        }
        out.table.rows.push_back({double(n), e.g0 / (4.0 * n), schedule.t_final(), tc.deviation, f10, f01,
                                  d10.log_negativity, d01.log_negativity,
                                  std::max(run10.max_top_population, run01.max_top_population), reliable ? 1.0 : 0.0});
    }
    out.summary.emplace_back("best_fidelity", best);
    out.summary.emplace_back("best_fidelity_n", best_n);
    out.summary.emplace_back("truncation_reliable", out.truncation_reliable ? 1.0 : 0.0);
    return out;
}

// ------------------------------ oracle --------------------------------------

// Uniform on [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

EntryResult compute_oracle(const ResolvedExperiment& e, bool strict) {
    const auto& o = e.oracle;
    std::mt19937_64 rng(o.seed);
    EntryResult out;
    out.table.columns = {"model", "r",  "kappa1", "kappa2", "gamma_m", "n_th", "n_0", "d1", "dm", "d2",
                         "t",     "E_N_gaussian", "E_N_fock", "abs_diff", "truncation_reliable"};
    FockOptions opts;
    opts.throw_on_leakage = strict;
    double worst = 0.0;
    int unreliable = 0;
    for (int k = 0; k < o.models; ++k) {
        InterfaceModel m;
        double r = 0.0;
        for (int attempt = 0;; ++attempt) {
            r = o.r_max * (0.1 + 0.9 * unit(rng));
            const double k1 = o.kappa_min + (o.kappa_max - o.kappa_min) * unit(rng);
            const double k2 = o.kappa_min + (o.kappa_max - o.kappa_min) * unit(rng);
            const double gm = o.gamma_min + (o.gamma_max - o.gamma_min) * unit(rng);
            const double nth = o.n_max * unit(rng);
            const double n0 = o.n_max * unit(rng);
            m = InterfaceModel::two_tone(e.g0, r, k1 * e.g0, k2 * e.g0, gm * e.g0, nth, n0);
            if (stability_check(m).stable) break;
            if (attempt > 1000) throw UnstableModelError("oracle: could not draw a stable model");
        }
        const double t1 = interference_time(e.g0, 1);
        const auto schedule = CouplingSchedule::constant(m.g1, m.g2, t1);
        const std::vector<double> times{0.0, 0.5 * t1, t1};
        const auto gauss = evolve(initial_state(m), m, schedule, times);

        // Size the truncation from the Gaussian occupations along the run.
        std::array<double, 3> nbar{0.0, 0.0, 0.0};
        for (const auto& st : evolve(initial_state(m), m, schedule, linear_grid(t1, 101))) {
            for (int q = 0; q < 3; ++q) nbar[q] = std::max(nbar[q], occupation(st.sigma, q));
        }
        const FockConfig config = FockConfig::for_occupations(nbar, o.tail);
        const auto fock = lindblad_evolve(FockState::initial(config, m), m, schedule, times, opts);
        for (std::size_t i = 1; i < times.size(); ++i) {
            const FockCovariance fc = covariance_from_fock(fock.states[i]);
            const bool reliable = fock.truncation_reliable && fc.reliable;
            const double eg = log_negativity(gauss[i]);
            const double ef = log_negativity(fc.state);
            worst = std::max(worst, std::abs(eg - ef));
            if (!reliable) ++unreliable;
            out.table.rows.push_back({double(k), r, m.kappa1, m.kappa2, m.gamma_m, m.n_th, m.n_0,
                                      double(config.dims[0]), double(config.dims[1]), double(config.dims[2]),
                                      times[i], eg, ef, std::abs(eg - ef), reliable ? 1.0 : 0.0});
        }
    }
    out.truncation_reliable = unreliable == 0;
    out.summary.emplace_back("models", o.models);
    out.summary.emplace_back("max_abs_diff", worst);
    out.summary.emplace_back("unreliable_points", unreliable);
    return out;
}

EntryResult compute(const ResolvedExperiment& e, bool strict) {
    switch (e.kind) {
        case ExperimentKind::TimeSeries: return compute_time_series(e);
        case ExperimentKind::Spectrum: return compute_spectrum(e);
        case ExperimentKind::Stationary: return compute_stationary(e);
        case ExperimentKind::Eigenmodes: return compute_eigenmodes(e);
        case ExperimentKind::StabilityScan: return compute_stability_scan(e);
        case ExperimentKind::Discrete: return compute_discrete(e, strict);
        case ExperimentKind::OracleCrosscheck: return compute_oracle(e, strict);
    }
    throw std::logic_error("compute: bad kind");
}

// ------------------------------ output --------------------------------------

std::string entry_file(const std::string& stem, std::size_t index, std::size_t count) {
    if (count <= 1) return stem + ".csv";
    const int width = static_cast<int>(std::to_string(count - 1).size());
    std::ostringstream os;
    os << stem << '_' << std::setw(width) << std::setfill('0') << index << ".csv";
    return os.str();
}

std::vector<std::string> header_comments(const ResolvedExperiment& e, std::size_t index, std::size_t count) {
    std::vector<std::string> c;
    c.push_back("optoment " + to_string(e.kind) + " output");
    c.push_back("entry = " + std::to_string(index) + " of " + std::to_string(count));
    for (const auto& [k, v] : e.sweep_values) c.push_back("sweep " + k + " = " + v);
    for (const auto& [k, v] : e.echo) c.push_back(k + " = " + v);
    return c;
}

struct Outcome {
    enum class Status { pending, ok, flagged, failed, skipped } status{Status::pending};
    int exit_code{exit_ok};
    std::string message;
    EntryResult result;
    std::string file;
    std::string sha;
};

const char* status_name(Outcome::Status s) {
    switch (s) {
        case Outcome::Status::pending: return "pending";
        case Outcome::Status::ok: return "ok";
        case Outcome::Status::flagged: return "truncation_unreliable";
        case Outcome::Status::failed: return "failed";
        case Outcome::Status::skipped: return "skipped";
    }
    return "unknown";
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string render_csv(const std::vector<std::string>& comments, const Table& table) {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    static std::atomic<unsigned long> counter{0};
    std::filesystem::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

RunReport run_config(const ExperimentConfig& config, const RunOptions& options) {
    RunReport report;
    auto log = [&](const std::string& line) {
        if (options.log) *options.log << line << '\n';
    };

    std::vector<ResolvedExperiment> entries;
    try {
        entries = resolve_all(config);
    } catch (const ConfigError& e) {
        report.exit_code = exit_config;
        report.message = std::string("config error: ") + e.what();
        return report;
    }
    if (options.parallel < 1) {
        report.exit_code = exit_config;
        report.message = "config error: --parallel must be >= 1";
        return report;
    }

    // Stationary quantities need a stable model; refuse before any work.
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (e.kind != ExperimentKind::Stationary && e.kind != ExperimentKind::Spectrum) continue;
        const auto rep = stability_check(e.model);
        if (!rep.stable) {
            report.exit_code = exit_instability;
            report.message = "instability: entry " + std::to_string(i) + " has no stationary state (margin " +
                             format_number(rep.margin) + ")";
            return report;
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) {
        report.exit_code = exit_failure;
        report.message = "cannot create output directory '" + options.out_dir.string() + "': " + ec.message();
        return report;
    }

    const std::size_t count = entries.size();
    std::vector<Outcome> outcomes(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex log_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next++;
            if (i >= count) return;
            Outcome& oc = outcomes[i];
            if (stop) {
                oc.status = Outcome::Status::skipped;
                continue;
            }
            const auto& e = entries[i];
            try {
                oc.result = compute(e, options.strict_truncation);
                oc.status = oc.result.truncation_reliable ? Outcome::Status::ok : Outcome::Status::flagged;
                std::vector<std::string> comments = header_comments(e, i, count);
                if (!oc.result.truncation_reliable) comments.push_back("warning = truncation_unreliable");
                const std::string body = render_csv(comments, oc.result.table);
                oc.file = entry_file(e.output, i, count);
                write_file_atomic(options.out_dir / oc.file, body);
                oc.sha = sha256_hex(body);
                if (!oc.result.truncation_reliable && options.strict_truncation) stop = true;
            } catch (const TruncationError& ex) {
                oc.status = Outcome::Status::failed;
                oc.exit_code = exit_truncation;
                oc.message = ex.what();
                if (options.strict_truncation) stop = true;
            } catch (const UnstableModelError& ex) {
                oc.status = Outcome::Status::failed;
                oc.exit_code = exit_instability;
                oc.message = ex.what();
            } catch (const DivergenceError& ex) {
                oc.status = Outcome::Status::failed;
                oc.exit_code = exit_instability;
                oc.message = ex.what();
            } catch (const std::exception& ex) {
                oc.status = Outcome::Status::failed;
                oc.exit_code = exit_failure;
                oc.message = ex.what();
            }
            std::lock_guard lock(log_mutex);
            log("entry " + std::to_string(i) + ": " + status_name(oc.status) +
                (oc.message.empty() ? "" : " (" + oc.message + ")"));
        }
    };
    const int threads = std::min<int>(options.parallel, static_cast<int>(count));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Summary: one row per computed entry, columns in first-seen order.
    Table summary;
    std::vector<std::string> sweep_cols;
    for (const auto& [k, v] : entries.front().sweep_values) sweep_cols.push_back(k);
    summary.columns.push_back("entry");
    summary.columns.insert(summary.columns.end(), sweep_cols.begin(), sweep_cols.end());
    std::vector<std::string> metric_cols;
    for (const auto& oc : outcomes) {
        for (const auto& [k, v] : oc.result.summary) {
            if (std::find(metric_cols.begin(), metric_cols.end(), k) == metric_cols.end()) metric_cols.push_back(k);
        }
    }
    summary.columns.insert(summary.columns.end(), metric_cols.begin(), metric_cols.end());
    summary.columns.push_back("truncation_reliable");
    std::vector<std::string> summary_comments{"optoment " + to_string(entries.front().kind) + " summary"};
    for (std::size_t i = 0; i < count; ++i) {
        const auto& oc = outcomes[i];
        if (oc.status != Outcome::Status::ok && oc.status != Outcome::Status::flagged) continue;
        std::vector<double> row{double(i)};
        for (const auto& [k, v] : entries[i].sweep_values) {
            double x = nan;
            const auto [ptr, err] = std::from_chars(v.data(), v.data() + v.size(), x);
            row.push_back(err == std::errc{} && ptr == v.data() + v.size() ? x : nan);
        }
        for (const auto& col : metric_cols) {
            double x = nan;
            for (const auto& [k, v] : oc.result.summary) {
                if (k == col) x = v;
            }
            row.push_back(x);
        }
        row.push_back(oc.result.truncation_reliable ? 1.0 : 0.0);
        summary.rows.push_back(std::move(row));
        for (const auto& [k, v] : entries[i].sweep_values) {
            summary_comments.push_back("entry " + std::to_string(i) + " " + k + " = " + v);
        }
    }
    const std::string stem = entries.front().output;
    const std::string summary_body = render_csv(summary_comments, summary);
    report.summary = options.out_dir / (stem + "_summary.csv");
    write_file_atomic(report.summary, summary_body);

    // Exit code: the most severe failure wins, then truncation flags.
    int code = exit_ok;
    std::string message;
    for (std::size_t i = 0; i < count; ++i) {
        const auto& oc = outcomes[i];
        if (oc.status == Outcome::Status::ok || oc.status == Outcome::Status::flagged) {
            report.outputs.push_back(options.out_dir / oc.file);
        }
        if (oc.status == Outcome::Status::flagged) report.flagged_entries.push_back(i);
        int c = oc.exit_code;
        if (oc.status == Outcome::Status::flagged) c = exit_truncation;
        if (oc.status == Outcome::Status::skipped) c = exit_truncation;
        auto rank = [](int x) {
            switch (x) {
                case exit_failure: return 4;
                case exit_instability: return 3;
                case exit_truncation: return 2;
                default: return 0;
            }
        };
        if (rank(c) > rank(code)) {
            code = c;
            message = oc.message.empty() ? "entry " + std::to_string(i) + " is truncation-unreliable"
                                         : "entry " + std::to_string(i) + ": " + oc.message;
        }
    }
    if (code == exit_truncation && options.strict_truncation) message += " (stopped by --strict-truncation)";

    nlohmann::ordered_json manifest;
    const std::string canonical = dump_config(config);
    manifest["config_sha256"] = sha256_hex(canonical);
    manifest["config"] = canonical;
    manifest["kind"] = to_string(entries.front().kind);
    manifest["entries"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < count; ++i) {
        const auto& oc = outcomes[i];
        nlohmann::ordered_json item;
        item["index"] = i;
        nlohmann::ordered_json sweep = nlohmann::ordered_json::object();
        for (const auto& [k, v] : entries[i].sweep_values) sweep[k] = v;
        item["sweep"] = sweep;
        item["status"] = status_name(oc.status);
        if (!oc.file.empty()) {
            item["file"] = oc.file;
            item["sha256"] = oc.sha;
        }
        if (!oc.message.empty()) item["message"] = oc.message;
        manifest["entries"].push_back(item);
    }
    manifest["summary"] = {{"file", report.summary.filename().string()}, {"sha256", sha256_hex(summary_body)}};
    manifest["exit_code"] = code;
    report.manifest = options.out_dir / (stem + "_manifest.json");
    write_file_atomic(report.manifest, manifest.dump(2) + "\n");

    report.exit_code = code;
    report.message = message;
    return report;
}

RunReport run_config_file(const std::string& path, const RunOptions& options) {
    try {
        return run_config(load_config(path), options);
    } catch (const ConfigError& e) {
        RunReport report;
        report.exit_code = exit_config;
        report.message = std::string("config error: ") + e.what();
        return report;
    }
}

RunReport run_preset(const std::string& name, const RunOptions& options) {
    try {
        const Preset& p = find_preset(name);
        return run_config(parse_config(p.config, "preset " + p.name), options);
    } catch (const ConfigError& e) {
        RunReport report;
        report.exit_code = exit_config;
        report.message = std::string("config error: ") + e.what();
        return report;
    }
}

}  // namespace optoment
