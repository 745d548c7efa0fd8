// runner.hpp — executes resolved experiments and writes CSV artifacts plus
// a JSON manifest

#pragma once

#include "optoment/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace optoment {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config = 2,
    exit_instability = 3,
    exit_truncation = 4,
};

struct RunOptions {
    std::filesystem::path out_dir{"."};
    int parallel{1};
    // Stop at the first truncation-unreliable result instead of finishing
    // the sweep with flagged outputs.
    bool strict_truncation{false};
    std::ostream* log{nullptr};
};

struct RunReport {
    int exit_code{exit_ok};
    std::string message;
    std::vector<std::filesystem::path> outputs;  // per-entry CSVs actually written
    std::filesystem::path summary;
    std::filesystem::path manifest;
    std::vector<std::size_t> flagged_entries;    // truncation-unreliable
};

RunReport run_config(const ExperimentConfig& config, const RunOptions& options = {});
RunReport run_config_file(const std::string& path, const RunOptions& options = {});
RunReport run_preset(const std::string& name, const RunOptions& options = {});

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Shortest representation that parses back to the same double.
std::string format_number(double value);
std::string render_csv(const std::vector<std::string>& comments, const Table& table);
// Writes `<path>.tmp-<pid>` and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string sha256_hex(std::string_view data);

}  // namespace optoment
