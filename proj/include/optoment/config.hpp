// config.hpp — experiment configuration: strict INI schema, sweeps and
// resolution into typed parameters
//
// Format (one key per line, `;` comments on their own line):
//
//   [experiment]
//   kind = time_series
//   [model]
//   g0 = 3
//   r = 1
//   [sweep]
//   parameter = model.n_th
//   values = 0; 10; 100; 1000
//
// A sweep names one or more dotted keys (comma separated); `values` holds one
// entry per run separated by `;`, with one comma-separated field per key.
// List-valued keys (grid.peaks, discrete.dims, ...) are space separated.

#pragma once

#include "optoment/model.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace optoment {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class ExperimentKind { TimeSeries, Spectrum, Stationary, Eigenmodes, StabilityScan, Discrete, OracleCrosscheck };

std::string to_string(ExperimentKind kind);
ExperimentKind kind_from_string(const std::string& name);

// Raw key/value text, section → key → value, exactly as written.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

struct ExperimentConfig {
    ConfigSections sections;
    std::string source;  // file name or preset name, for messages only
};

ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");
ExperimentConfig load_config(const std::string& path);
// Canonical text: schema section order, schema key order, values verbatim.
std::string dump_config(const ExperimentConfig& config);

enum class ScheduleType { Constant, Adiabatic, Swap };

struct ScheduleParams {
    ScheduleType type{ScheduleType::Constant};
    double lambda{0.0};
    int swap_n{0};
    double periods{3.0};  // run length in units of π/g₀
};

struct GridParams {
    int points{2000};
    std::vector<int> peaks{1, 2, 3};
};

struct FilterParams {
    double delta_omega{0.05};  // in units of g₀
    double omega_max{2.0};     // in units of g₀
    std::vector<double> probes{0.0, 1.0};
    std::vector<double> sensitivity{0.01, 0.1};
};

struct ScanParams {
    double r_min{0.2}, r_max{1.6};
    int r_points{29};
    double ratio_min{0.1}, ratio_max{0.99};
    int ratio_points{20};
    double kappa_ratio_min{0.5}, kappa_ratio_max{2.0};
    int kappa_ratio_points{20};
    double band{0.1};
};

struct StationaryParams {
    bool compare_schemes{false};
    double adiabatic_target_r{1.0};
    int adiabatic_n{2};
    bool parseval{false};
    double parseval_window{20.0};
};

struct DiscreteParams {
    std::vector<int> swap_n{1, 2, 3, 4};
    std::array<int, 3> dims{3, 6, 3};
};

struct OracleParams {
    int models{20};
    unsigned long long seed{20240601ULL};
    double r_max{0.4};
    double n_max{1.0};
    double kappa_min{0.02}, kappa_max{0.2};
    double gamma_min{0.001}, gamma_max{0.02};
    double tail{2e-5};
};

struct ResolvedExperiment {
    ExperimentKind kind{ExperimentKind::TimeSeries};
    std::string output;
    InterfaceModel model;
    double g0{0.0};
    bool link_n0{false};
    ScheduleParams schedule;
    GridParams grid;
    FilterParams filter;
    ScanParams scan;
    StationaryParams stationary;
    DiscreteParams discrete;
    OracleParams oracle;
    // Sweep assignments of this entry, in sweep order.
    std::vector<std::pair<std::string, std::string>> sweep_values;
    // Every resolved parameter (defaults included), for CSV headers.
    std::vector<std::pair<std::string, std::string>> echo;

    CouplingSchedule make_schedule() const;
};

struct SweepSpec {
    std::vector<std::string> parameters;
    std::vector<std::vector<std::string>> values;

    std::size_t entries() const { return values.empty() ? 1 : values.size(); }
};

SweepSpec sweep_of(const ExperimentConfig& config);

// Resolves every sweep entry; throws ConfigError naming the offending key.
std::vector<ResolvedExperiment> resolve_all(const ExperimentConfig& config);

}  // namespace optoment
