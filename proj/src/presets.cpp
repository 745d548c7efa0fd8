// presets.cpp — embedded experiment configs

#include "optoment/presets.hpp"

#include "optoment/config.hpp"

namespace optoment {

namespace {

// Shared parameter block: g₀ = 3, (κ₁, κ₂) = (0.3, 0.2), γ_m = 0.001.
#define OPTOMENT_PAPER_MODEL \
    "[model]\n"                \
    "variant = two_tone_squeezing\n" \
    "g0 = 3\n"                 \
    "kappa1 = 0.3\n"           \
    "kappa2 = 0.2\n"           \
    "gamma_m = 0.001\n"

std::vector<Preset> build() {
    return {
        {"fig2a", "E_N(t), constant couplings, r = 1, n_0 = n_th swept over 0, 10, 100, 1000",
         "[experiment]\nkind = time_series\noutput = fig2a\n\n" OPTOMENT_PAPER_MODEL
         "r = 1\nlink_n0 = true\n\n"
         "[schedule]\ntype = constant\nperiods = 3\n\n"
         "[grid]\npoints = 2000\npeaks = 1 2 3\n\n"
         "[sweep]\nparameter = model.n_th\nvalues = 0; 10; 100; 1000\n"},
        {"fig2b", "E_N(t), adiabatic scheme with r(t_2) = 1, n_0 = n_th swept over 0, 10, 100, 1000",
         "[experiment]\nkind = time_series\noutput = fig2b\n\n" OPTOMENT_PAPER_MODEL
         "link_n0 = true\n\n"
         "[schedule]\ntype = adiabatic\ntarget_r = 1\ntarget_n = 2\nperiods = 3\n\n"
         "[grid]\npoints = 2000\npeaks = 1 2 3\n\n"
         "[sweep]\nparameter = model.n_th\nvalues = 0; 10; 100; 1000\n"},
        {"fig2c", "Peak E_N at t_1 (constant), t_2 (adiabatic) and stationary E_N versus n_th = n_0",
         "[experiment]\nkind = stationary\noutput = fig2c\n\n" OPTOMENT_PAPER_MODEL
         "r = 1\nlink_n0 = true\n\n"
         "[stationary]\ncompare_schemes = true\nadiabatic_target_r = 1\nadiabatic_n = 2\n\n"
         "[grid]\npoints = 2000\n\n"
         "[sweep]\nparameter = model.n_th\nvalues = 1; 10; 100; 1000; 10000\n"},
        {"fig2d", "E_N(t), adiabatic scheme, n_th = 1000 with n_0 swept, plus n_0 = n_th = 0",
         "[experiment]\nkind = time_series\noutput = fig2d\n\n" OPTOMENT_PAPER_MODEL
         "n_th = 1000\nn_0 = 0\n\n"
         "[schedule]\ntype = adiabatic\ntarget_r = 1\ntarget_n = 2\nperiods = 3\n\n"
         "[grid]\npoints = 2000\npeaks = 1 2 3\n\n"
         "[sweep]\nparameter = model.n_0, model.n_th\n"
         "values = 0, 1000; 10, 1000; 100, 1000; 1000, 1000; 0, 0\n"},
        {"fig3a", "Output entanglement spectrum, (kappa1, kappa2) = (0.3, 0.2), r = 1, n_th swept",
         "[experiment]\nkind = spectrum\noutput = fig3a\n\n" OPTOMENT_PAPER_MODEL
         "r = 1\n\n"
         "[filter]\ndelta_omega = 0.05\nomega_max = 2\nprobes = -1 0 1\nsensitivity = 0.01 0.1\n\n"
         "[sweep]\nparameter = model.n_th\nvalues = 0; 10; 100; 1000\n"},
        {"fig3b", "Output entanglement spectrum, (kappa1, kappa2) = (0.2, 0.3), r = 1, n_th swept",
         "[experiment]\nkind = spectrum\noutput = fig3b\n\n"
         "[model]\nvariant = two_tone_squeezing\ng0 = 3\nkappa1 = 0.2\nkappa2 = 0.3\ngamma_m = 0.001\n"
         "r = 1\n\n"
         "[filter]\ndelta_omega = 0.05\nomega_max = 2\nprobes = -1 0 1\nsensitivity = 0.01 0.1\n\n"
         "[sweep]\nparameter = model.n_th\nvalues = 0; 10; 100; 1000\n"},
        {"fig3c", "Output E_N at omega_n = 0 and +-g0, plus stationary E_N, versus n_th",
         "[experiment]\nkind = spectrum\noutput = fig3c\n\n" OPTOMENT_PAPER_MODEL
         "r = 1\n\n"
         "[filter]\ndelta_omega = 0.05\nomega_max = 0\nprobes = -1 0 1\nsensitivity = 0.01 0.1\n\n"
         "[sweep]\nparameter = model.n_th\nvalues = 0; 1; 10; 100; 1000; 10000\n"},
        {"fig3d", "Imaginary eigenvalue shifts delta_lambda_1,2 versus r for both damping orderings",
         "[experiment]\nkind = eigenmodes\noutput = fig3d\n\n"
         "[model]\nvariant = two_tone_squeezing\ng0 = 3\nkappa1 = 0.3\nkappa2 = 0.2\ngamma_m = 0.001\n\n"
         "[scan]\nr_min = 0.02\nr_max = 2\nr_points = 100\n\n"
         "[sweep]\nparameter = model.kappa1, model.kappa2\nvalues = 0.3, 0.2; 0.2, 0.3\n"},
        {"eq8_check", "Constant scheme without damping: E_N(t_n) against 4 r log2(e) and the analytic covariance",
         "[experiment]\nkind = time_series\noutput = eq8_check\n\n"
         "[model]\nvariant = two_tone_squeezing\ng0 = 3\nr = 1\n\n"
         "[schedule]\ntype = constant\nperiods = 2\n\n"
         "[grid]\npoints = 2001\npeaks = 1 2\n\n"
         "[sweep]\nparameter = model.r\nvalues = 0.25; 0.5; 1\n"},
        {"eq9_check", "Adiabatic scheme without damping: E_N(t_n) against 2 r log2(e) as lambda/g0 shrinks",
         "[experiment]\nkind = time_series\noutput = eq9_check\n\n"
         "[model]\nvariant = two_tone_squeezing\ng0 = 3\n\n"
         "[schedule]\ntype = adiabatic\nlambda_rel = 0.04\nperiods = 8\n\n"
         "[grid]\npoints = 4001\npeaks = 8\n\n"
         "[sweep]\nparameter = schedule.lambda_rel, schedule.periods, grid.peaks, grid.points\n"
         "values = 0.04, 8, 8, 4001; 0.02, 16, 16, 8001; 0.01, 32, 32, 16001\n"},
        {"eq12_check", "Discrete beamsplitter swap: transfer-matrix deviation and final-state fidelity",
         "[experiment]\nkind = discrete\noutput = eq12_check\n\n"
         "[model]\nvariant = double_beamsplitter\ng0 = 1\nkappa1 = 0\nkappa2 = 0\ngamma_m = 0\n"
         "n_th = 0\nn_0 = 0\n\n"
         "[discrete]\nswap_n = 1 2 3 4 8\ndims = 3 6 3\n\n"
         "[sweep]\nparameter = model.kappa1, model.kappa2, model.gamma_m, model.n_th, model.n_0, discrete.swap_n, discrete.dims\n"
         "values = 0, 0, 0, 0, 0, 1 2 3 4 8, 3 6 3; 0.1, 0.1, 0.001, 1, 1, 1 4, 14 16 14\n"},
        {"parseval_check", "Frequency-integrated internal spectra against the Lyapunov stationary covariance",
         "[experiment]\nkind = stationary\noutput = parseval_check\n\n" OPTOMENT_PAPER_MODEL
         "r = 1\n\n"
         "[stationary]\nparseval = true\nparseval_window = 20\n\n"
         "[sweep]\nparameter = model.kappa1, model.kappa2, model.n_th\n"
         "values = 0.3, 0.2, 0; 0.3, 0.2, 1000; 0.2, 0.3, 0; 0.2, 0.3, 1000\n"},
    };
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = build();
    return all;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (p.name == name) return p;
    }
    std::string names;
    for (const auto& p : presets()) names += (names.empty() ? "" : ", ") + p.name;
    throw ConfigError("preset", "unknown preset '" + name + "' (available: " + names + ")");
}

}  // namespace optoment
