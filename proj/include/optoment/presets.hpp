// presets.hpp — embedded experiment configs for the paper's figures and
// analytic checks

#pragma once

#include <string>
#include <vector>

namespace optoment {

struct Preset {
    std::string name;
    std::string description;
    std::string config;  // INI text, parseable by parse_config
};

const std::vector<Preset>& presets();

// Throws ConfigError listing the available names when `name` is unknown.
const Preset& find_preset(const std::string& name);

}  // namespace optoment
