// config.cpp — INI parsing, schema checks and parameter resolution

#include "optoment/config.hpp"

#include "optoment/fock.hpp"
#include "optoment/gaussian.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace optoment {

namespace {

struct KeySpec {
    const char* section;
    const char* key;
};

// Order here is the canonical dump order.
constexpr KeySpec schema[] = {
    {"experiment", "kind"},        {"experiment", "output"},

    {"model", "variant"},          {"model", "g0"},
    {"model", "r"},                {"model", "g1"},
    {"model", "g2"},               {"model", "kappa1"},
    {"model", "kappa2"},           {"model", "gamma_m"},
    {"model", "n_th"},             {"model", "n_0"},
    {"model", "link_n0"},

    {"schedule", "type"},          {"schedule", "lambda"},
    {"schedule", "lambda_rel"},    {"schedule", "target_r"},
    {"schedule", "target_n"},      {"schedule", "swap_n"},
    {"schedule", "periods"},

    {"grid", "points"},            {"grid", "peaks"},

    {"filter", "delta_omega"},     {"filter", "omega_max"},
    {"filter", "probes"},          {"filter", "sensitivity"},

    {"scan", "r_min"},             {"scan", "r_max"},
    {"scan", "r_points"},          {"scan", "ratio_min"},
    {"scan", "ratio_max"},         {"scan", "ratio_points"},
    {"scan", "kappa_ratio_min"},   {"scan", "kappa_ratio_max"},
    {"scan", "kappa_ratio_points"}, {"scan", "band"},

    {"stationary", "compare_schemes"}, {"stationary", "adiabatic_target_r"},
    {"stationary", "adiabatic_n"},     {"stationary", "parseval"},
    {"stationary", "parseval_window"},

    {"discrete", "swap_n"},        {"discrete", "dims"},

    {"oracle", "models"},          {"oracle", "seed"},
    {"oracle", "r_max"},           {"oracle", "n_max"},
    {"oracle", "kappa_min"},       {"oracle", "kappa_max"},
    {"oracle", "gamma_min"},       {"oracle", "gamma_max"},
    {"oracle", "tail"},

    {"sweep", "parameter"},        {"sweep", "values"},
};

const std::vector<std::string> section_order{"experiment", "model",  "schedule", "grid",  "filter",
                                             "scan",       "stationary", "discrete", "oracle", "sweep"};

bool known_key(const std::string& section, const std::string& key) {
    return std::any_of(std::begin(schema), std::end(schema),
                       [&](const KeySpec& k) { return section == k.section && key == k.key; });
}

bool known_section(const std::string& section) {
    return std::find(section_order.begin(), section_order.end(), section) != section_order.end();
}

std::set<std::string> sections_for(ExperimentKind kind) {
    std::set<std::string> s{"experiment", "model", "sweep"};
    switch (kind) {
        case ExperimentKind::TimeSeries: s.insert({"schedule", "grid"}); break;
        case ExperimentKind::Spectrum: s.insert("filter"); break;
        case ExperimentKind::Stationary: s.insert({"stationary", "grid"}); break;
        case ExperimentKind::Eigenmodes:
        case ExperimentKind::StabilityScan: s.insert("scan"); break;
        case ExperimentKind::Discrete: s.insert("discrete"); break;
        case ExperimentKind::OracleCrosscheck: s.insert("oracle"); break;
    }
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (is >> item) out.push_back(item);
    return out;
}

double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw ConfigError(key, "expected a finite number, got '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(key, "expected true or false, got '" + text + "'");
}

// Typed access to one resolved section set, recording what was used.
class Reader {
public:
    Reader(const ConfigSections& sections, std::vector<std::pair<std::string, std::string>>& echo)
        : sections_(sections), echo_(echo) {}

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) return std::nullopt;
        const auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    }

    bool has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

    std::string text(const std::string& section, const std::string& key, const std::string& fallback) {
        const std::string v = raw(section, key).value_or(fallback);
        note(section, key, v);
        return v;
    }

    double real(const std::string& section, const std::string& key, std::optional<double> fallback = {}) {
        const auto r = raw(section, key);
        if (!r) {
            if (!fallback) throw ConfigError(section + "." + key, "missing required key");
            note(section, key, format(*fallback));
            return *fallback;
        }
        note(section, key, *r);
        return parse_real(section + "." + key, *r);
    }

    long long integer(const std::string& section, const std::string& key, long long fallback) {
        const auto r = raw(section, key);
        if (!r) {
            note(section, key, std::to_string(fallback));
            return fallback;
        }
        note(section, key, *r);
        return parse_integer(section + "." + key, *r);
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) {
        const auto r = raw(section, key);
        if (!r) {
            note(section, key, fallback ? "true" : "false");
            return fallback;
        }
        note(section, key, *r);
        return parse_bool(section + "." + key, *r);
    }

    template <class T>
    std::vector<T> list(const std::string& section, const std::string& key, const std::vector<T>& fallback) {
        const auto r = raw(section, key);
        if (!r) {
            std::string joined;
            for (std::size_t i = 0; i < fallback.size(); ++i) {
                if (i) joined += ' ';
                if constexpr (std::is_integral_v<T>) {
                    joined += std::to_string(fallback[i]);
                } else {
                    joined += format(fallback[i]);
                }
            }
            note(section, key, joined);
            return fallback;
        }
        note(section, key, *r);
        std::vector<T> out;
        for (const auto& item : split_ws(*r)) {
            if constexpr (std::is_integral_v<T>) {
                out.push_back(static_cast<T>(parse_integer(section + "." + key, item)));
            } else {
                out.push_back(parse_real(section + "." + key, item));
            }
        }
        if (out.empty()) throw ConfigError(section + "." + key, "empty list");
        return out;
    }

    void derived(const std::string& key, double value) { echo_.emplace_back("derived." + key, format(value)); }

    static std::string format(double v) {
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

private:
    void note(const std::string& section, const std::string& key, const std::string& value) {
        echo_.emplace_back(section + "." + key, value);
    }

    const ConfigSections& sections_;
    std::vector<std::pair<std::string, std::string>>& echo_;
};

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

void reject(const Reader& rd, const std::string& section, const std::string& key, const std::string& why) {
    if (rd.has(section, key)) throw ConfigError(section + "." + key, why);
}

void resolve_model(Reader& rd, ResolvedExperiment& out) {
    const std::string variant = rd.text("model", "variant", "two_tone_squeezing");
    try {
        out.model.variant = variant_from_string(variant);
    } catch (const std::exception&) {
        throw ConfigError("model.variant", "expected two_tone_squeezing or double_beamsplitter, got '" + variant + "'");
    }
    const bool dynamic_schedule = out.kind == ExperimentKind::TimeSeries &&
                                  out.schedule.type != ScheduleType::Constant;
    const bool oracle = out.kind == ExperimentKind::OracleCrosscheck;
    const bool discrete = out.kind == ExperimentKind::Discrete;

    if (oracle) {
        for (const char* k : {"r", "g1", "g2", "kappa1", "kappa2", "gamma_m", "n_th", "n_0", "link_n0"}) {
            reject(rd, "model", k, "not used by kind oracle_crosscheck (models are drawn at random)");
        }
        out.g0 = rd.real("model", "g0", 1.0);
        require(out.g0 > 0.0, "model.g0", "must be > 0");
        out.model.g1 = out.g0;
        return;
    }

    out.model.kappa1 = rd.real("model", "kappa1", 0.0);
    out.model.kappa2 = rd.real("model", "kappa2", 0.0);
    out.model.gamma_m = rd.real("model", "gamma_m", 0.0);
    out.model.n_th = rd.real("model", "n_th", 0.0);
    out.link_n0 = rd.boolean("model", "link_n0", false);
    if (out.link_n0) {
        reject(rd, "model", "n_0", "cannot be set together with model.link_n0 = true");
        out.model.n_0 = out.model.n_th;
        rd.derived("n_0", out.model.n_0);
    } else {
        out.model.n_0 = rd.real("model", "n_0", 0.0);
    }

    const bool has_polar = rd.has("model", "g0") || rd.has("model", "r");
    const bool has_direct = rd.has("model", "g1") || rd.has("model", "g2");
    if (dynamic_schedule || discrete) {
        for (const char* k : {"r", "g1", "g2"}) {
            reject(rd, "model", k, "couplings come from the schedule here; give model.g0 only");
        }
        out.g0 = rd.real("model", "g0");
        require(out.g0 > 0.0, "model.g0", "must be > 0");
        if (discrete) {
            require(out.model.variant == Variant::DoubleBeamsplitter, "model.variant",
                    "kind discrete needs double_beamsplitter");
        }
        out.model.g1 = 0.0;
        out.model.g2 = 0.0;
    } else if (has_polar && has_direct) {
        throw ConfigError("model.g1", "give either (g0, r) or (g1, g2), not both");
    } else if (has_direct) {
        out.model.g1 = rd.real("model", "g1");
        out.model.g2 = rd.real("model", "g2", 0.0);
        out.g0 = out.model.g0();
    } else {
        out.g0 = rd.real("model", "g0");
        const double r = rd.real("model", "r", 0.0);
        require(out.g0 > 0.0, "model.g0", "must be > 0");
        require(r >= 0.0, "model.r", "must be >= 0");
        if (out.model.variant == Variant::TwoToneSqueezing) {
            out.model.g1 = out.g0 * std::cosh(r);
            out.model.g2 = out.g0 * std::sinh(r);
        } else {
            require(r == 0.0, "model.r", "only meaningful for two_tone_squeezing");
            out.model.g1 = out.g0;
        }
    }
    rd.derived("g1", out.model.g1);
    rd.derived("g2", out.model.g2);
    try {
        out.model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("model", e.what());
    }
}

void resolve_schedule(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::TimeSeries) return;
    const std::string type = rd.text("schedule", "type", "constant");
    if (type == "constant") {
        out.schedule.type = ScheduleType::Constant;
    } else if (type == "adiabatic") {
        out.schedule.type = ScheduleType::Adiabatic;
    } else if (type == "swap") {
        out.schedule.type = ScheduleType::Swap;
    } else {
        throw ConfigError("schedule.type", "expected constant, adiabatic or swap, got '" + type + "'");
    }
    out.schedule.periods = rd.real("schedule", "periods", 3.0);
    require(out.schedule.periods > 0.0, "schedule.periods", "must be > 0");
}

void resolve_schedule_rates(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::TimeSeries) return;
    auto& s = out.schedule;
    switch (s.type) {
        case ScheduleType::Constant:
            for (const char* k : {"lambda", "lambda_rel", "target_r", "target_n", "swap_n"}) {
                reject(rd, "schedule", k, "not used by a constant schedule");
            }
            break;
        case ScheduleType::Adiabatic: {
            reject(rd, "schedule", "swap_n", "only used by a swap schedule");
            const int forms = int(rd.has("schedule", "lambda")) + int(rd.has("schedule", "lambda_rel")) +
                              int(rd.has("schedule", "target_r") || rd.has("schedule", "target_n"));
            require(forms == 1, "schedule.lambda", "give exactly one of lambda, lambda_rel or (target_r, target_n)");
            if (rd.has("schedule", "lambda")) {
                s.lambda = rd.real("schedule", "lambda");
            } else if (rd.has("schedule", "lambda_rel")) {
                s.lambda = rd.real("schedule", "lambda_rel") * out.g0;
            } else {
                const double target_r = rd.real("schedule", "target_r");
                const long long n = rd.integer("schedule", "target_n", 2);
                require(n >= 1, "schedule.target_n", "must be >= 1");
                require(target_r > 0.0, "schedule.target_r", "must be > 0");
                s.lambda = target_r / interference_time(out.g0, static_cast<int>(n));
            }
            require(s.lambda > 0.0, "schedule.lambda", "must be > 0");
            out.model.g1 = out.g0;
            out.model.g2 = 0.0;
            rd.derived("lambda", s.lambda);
            break;
        }
        case ScheduleType::Swap: {
            for (const char* k : {"lambda", "lambda_rel", "target_r", "target_n"}) {
                reject(rd, "schedule", k, "a swap schedule is set by swap_n alone");
            }
            require(out.model.variant == Variant::DoubleBeamsplitter, "model.variant",
                    "a swap schedule needs double_beamsplitter");
            const long long n = rd.integer("schedule", "swap_n", 4);
            require(n >= 1, "schedule.swap_n", "must be >= 1");
            s.swap_n = static_cast<int>(n);
            s.lambda = out.g0 / (4.0 * n);
            out.model.g1 = 0.0;
            out.model.g2 = -out.g0;
            rd.derived("lambda", s.lambda);
            break;
        }
    }
}

void resolve_grid(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::TimeSeries && out.kind != ExperimentKind::Stationary) return;
    const long long points = rd.integer("grid", "points", 2000);
    require(points >= 3 && points <= 10000000, "grid.points", "must be in [3, 1e7]");
    out.grid.points = static_cast<int>(points);
    if (out.kind == ExperimentKind::TimeSeries) {
        out.grid.peaks = rd.list<int>("grid", "peaks", {1, 2, 3});
        for (int n : out.grid.peaks) {
            require(n >= 1 && n <= out.schedule.periods + 1e-9, "grid.peaks",
                    "each peak index must lie in [1, schedule.periods]");
        }
    } else {
        reject(rd, "grid", "peaks", "only used by kind time_series");
    }
}

void resolve_filter(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::Spectrum) return;
    auto& f = out.filter;
    f.delta_omega = rd.real("filter", "delta_omega", 0.05);
    f.omega_max = rd.real("filter", "omega_max", 2.0);
    f.probes = rd.list<double>("filter", "probes", {0.0, 1.0});
    f.sensitivity = rd.list<double>("filter", "sensitivity", {0.01, 0.1});
    require(f.delta_omega > 0.0 && f.delta_omega <= 0.1, "filter.delta_omega", "must be in (0, 0.1] (units of g0)");
    require(f.omega_max >= 0.0, "filter.omega_max", "must be >= 0");
    for (double d : f.sensitivity) {
        require(d > 0.0 && d <= 0.1, "filter.sensitivity", "entries must be in (0, 0.1] (units of g0)");
    }
    require(out.model.variant == Variant::TwoToneSqueezing, "model.variant", "kind spectrum needs two_tone_squeezing");
    require(out.model.g1 > out.model.g2, "model.r", "kind spectrum needs g1 > g2");
}

void resolve_scan(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::Eigenmodes && out.kind != ExperimentKind::StabilityScan) return;
    auto& s = out.scan;
    auto points = [&](const char* key, int fallback) {
        const long long v = rd.integer("scan", key, fallback);
        require(v >= 1 && v <= 100000, std::string("scan.") + key, "must be in [1, 1e5]");
        return static_cast<int>(v);
    };
    if (out.kind == ExperimentKind::Eigenmodes) {
        for (const char* k : {"ratio_min", "ratio_max", "ratio_points", "kappa_ratio_min", "kappa_ratio_max",
                              "kappa_ratio_points", "band"}) {
            reject(rd, "scan", k, "only used by kind stability_scan");
        }
        s.r_min = rd.real("scan", "r_min", 0.2);
        s.r_max = rd.real("scan", "r_max", 1.6);
        s.r_points = points("r_points", 29);
        require(s.r_min > 0.0 && s.r_max >= s.r_min, "scan.r_min", "need 0 < r_min <= r_max");
        require(out.model.variant == Variant::TwoToneSqueezing, "model.variant",
                "kind eigenmodes needs two_tone_squeezing");
        reject(rd, "model", "r", "the squeezing is scanned; give model.g0 only");
    } else {
        for (const char* k : {"r_min", "r_max", "r_points"}) reject(rd, "scan", k, "only used by kind eigenmodes");
        s.ratio_min = rd.real("scan", "ratio_min", 0.1);
        s.ratio_max = rd.real("scan", "ratio_max", 0.99);
        s.ratio_points = points("ratio_points", 20);
        s.kappa_ratio_min = rd.real("scan", "kappa_ratio_min", 0.5);
        s.kappa_ratio_max = rd.real("scan", "kappa_ratio_max", 2.0);
        s.kappa_ratio_points = points("kappa_ratio_points", 20);
        s.band = rd.real("scan", "band", 0.1);
        require(s.ratio_min > 0.0 && s.ratio_max >= s.ratio_min, "scan.ratio_min", "need 0 < ratio_min <= ratio_max");
        require(s.kappa_ratio_min > 0.0 && s.kappa_ratio_max >= s.kappa_ratio_min, "scan.kappa_ratio_min",
                "need 0 < kappa_ratio_min <= kappa_ratio_max");
        require(s.band >= 0.0, "scan.band", "must be >= 0");
        require(out.model.kappa1 > 0.0, "model.kappa1", "kind stability_scan needs kappa1 > 0");
        require(out.model.variant == Variant::TwoToneSqueezing, "model.variant",
                "kind stability_scan needs two_tone_squeezing");
    }
}

void resolve_stationary(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::Stationary) return;
    auto& s = out.stationary;
    s.compare_schemes = rd.boolean("stationary", "compare_schemes", false);
    if (s.compare_schemes) {
        s.adiabatic_target_r = rd.real("stationary", "adiabatic_target_r", 1.0);
        const long long n = rd.integer("stationary", "adiabatic_n", 2);
        require(n >= 1, "stationary.adiabatic_n", "must be >= 1");
        s.adiabatic_n = static_cast<int>(n);
        require(s.adiabatic_target_r > 0.0, "stationary.adiabatic_target_r", "must be > 0");
        require(out.model.variant == Variant::TwoToneSqueezing, "model.variant",
                "compare_schemes needs two_tone_squeezing");
    } else {
        reject(rd, "stationary", "adiabatic_target_r", "only used with compare_schemes = true");
        reject(rd, "stationary", "adiabatic_n", "only used with compare_schemes = true");
        reject(rd, "grid", "points", "only used with compare_schemes = true");
    }
    s.parseval = rd.boolean("stationary", "parseval", false);
    if (s.parseval) {
        s.parseval_window = rd.real("stationary", "parseval_window", 20.0);
        require(s.parseval_window >= 2.0, "stationary.parseval_window", "must be >= 2 (units of g0)");
    } else {
        reject(rd, "stationary", "parseval_window", "only used with parseval = true");
    }
}

void resolve_discrete(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::Discrete) return;
    out.discrete.swap_n = rd.list<int>("discrete", "swap_n", {1, 2, 3, 4});
    for (int n : out.discrete.swap_n) require(n >= 1 && n <= 1000, "discrete.swap_n", "entries must be in [1, 1000]");
    const auto dims = rd.list<int>("discrete", "dims", {3, 6, 3});
    require(dims.size() == 3, "discrete.dims", "expected three cutoffs");
    for (int k = 0; k < 3; ++k) out.discrete.dims[k] = dims[k];
    require(dims[0] >= 2 && dims[2] >= 2 && dims[1] >= 1, "discrete.dims", "cavities need at least 2 levels");
    FockConfig check;
    check.dims = out.discrete.dims;
    try {
        check.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("discrete.dims", e.what());
    }
}

void resolve_oracle(Reader& rd, ResolvedExperiment& out) {
    if (out.kind != ExperimentKind::OracleCrosscheck) return;
    auto& o = out.oracle;
    const long long models = rd.integer("oracle", "models", 20);
    require(models >= 1 && models <= 10000, "oracle.models", "must be in [1, 1e4]");
    o.models = static_cast<int>(models);
    const long long seed = rd.integer("oracle", "seed", 20240601LL);
    require(seed >= 0, "oracle.seed", "must be >= 0");
    o.seed = static_cast<unsigned long long>(seed);
    o.r_max = rd.real("oracle", "r_max", 0.4);
    o.n_max = rd.real("oracle", "n_max", 1.0);
    o.kappa_min = rd.real("oracle", "kappa_min", 0.02);
    o.kappa_max = rd.real("oracle", "kappa_max", 0.2);
    o.gamma_min = rd.real("oracle", "gamma_min", 0.001);
    o.gamma_max = rd.real("oracle", "gamma_max", 0.02);
    o.tail = rd.real("oracle", "tail", 2e-5);
    require(o.r_max > 0.0 && o.r_max <= 0.6, "oracle.r_max", "must be in (0, 0.6]");
    require(o.n_max >= 0.0 && o.n_max <= 2.0, "oracle.n_max", "must be in [0, 2]");
    require(o.kappa_min > 0.0 && o.kappa_max >= o.kappa_min, "oracle.kappa_min", "need 0 < kappa_min <= kappa_max");
    require(o.gamma_min >= 0.0 && o.gamma_max >= o.gamma_min, "oracle.gamma_min", "need 0 <= gamma_min <= gamma_max");
    require(o.tail > 0.0 && o.tail < 1e-4, "oracle.tail", "must be in (0, 1e-4)");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::TimeSeries: return "time_series";
        case ExperimentKind::Spectrum: return "spectrum";
        case ExperimentKind::Stationary: return "stationary";
        case ExperimentKind::Eigenmodes: return "eigenmodes";
        case ExperimentKind::StabilityScan: return "stability_scan";
        case ExperimentKind::Discrete: return "discrete";
        case ExperimentKind::OracleCrosscheck: return "oracle_crosscheck";
    }
    return "unknown";
}

ExperimentKind kind_from_string(const std::string& name) {
    for (auto k : {ExperimentKind::TimeSeries, ExperimentKind::Spectrum, ExperimentKind::Stationary,
                   ExperimentKind::Eigenmodes, ExperimentKind::StabilityScan, ExperimentKind::Discrete,
                   ExperimentKind::OracleCrosscheck}) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("experiment.kind", "unknown kind '" + name +
                                             "' (expected time_series, spectrum, stationary, eigenmodes, "
                                             "stability_scan, discrete or oracle_crosscheck)");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    boost::property_tree::ptree tree;
    std::istringstream is(text);
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        std::ostringstream os;
        os << source << " line " << e.line() << ": " << e.message();
        throw ConfigError("", os.str());
    }
    ExperimentConfig config;
    config.source = source;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError(section, "keys must live inside a [section]");
        if (!known_section(section)) throw ConfigError(section, "unknown section");
        auto& keys = config.sections[section];
        for (const auto& [key, value] : body) {
            if (!known_key(section, key)) throw ConfigError(section + "." + key, "unknown key");
            keys[key] = trim(value.data());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str(), path);
}

std::string dump_config(const ExperimentConfig& config) {
    std::ostringstream os;
    bool first = true;
    for (const auto& section : section_order) {
        const auto it = config.sections.find(section);
        if (it == config.sections.end() || it->second.empty()) continue;
        if (!first) os << '\n';
        first = false;
        os << '[' << section << "]\n";
        for (const auto& spec : schema) {
            if (section != spec.section) continue;
            const auto kv = it->second.find(spec.key);
            if (kv != it->second.end()) os << spec.key << " = " << kv->second << '\n';
        }
    }
    return os.str();
}

SweepSpec sweep_of(const ExperimentConfig& config) {
    SweepSpec sweep;
    const auto it = config.sections.find("sweep");
    if (it == config.sections.end()) return sweep;
    const auto param = it->second.find("parameter");
    const auto values = it->second.find("values");
    const bool has_param = param != it->second.end() && !param->second.empty();
    const bool has_values = values != it->second.end() && !values->second.empty();
    if (!has_param && !has_values) return sweep;
    if (!has_param) throw ConfigError("sweep.parameter", "missing while sweep.values is set");
    if (!has_values) throw ConfigError("sweep.values", "missing while sweep.parameter is set");

    for (const auto& name : split(param->second, ',')) {
        const auto dot = name.find('.');
        if (dot == std::string::npos) throw ConfigError("sweep.parameter", "expected section.key, got '" + name + "'");
        const std::string section = name.substr(0, dot);
        const std::string key = name.substr(dot + 1);
        if (!known_key(section, key)) throw ConfigError("sweep.parameter", "unknown key '" + name + "'");
        if (section == "sweep" || section == "experiment") {
            throw ConfigError("sweep.parameter", "'" + name + "' cannot be swept");
        }
        if (std::find(sweep.parameters.begin(), sweep.parameters.end(), name) != sweep.parameters.end()) {
            throw ConfigError("sweep.parameter", "'" + name + "' listed twice");
        }
        sweep.parameters.push_back(name);
    }
    for (const auto& entry : split(values->second, ';')) {
        auto fields = split(entry, ',');
        if (fields.size() != sweep.parameters.size()) {
            throw ConfigError("sweep.values", "entry '" + entry + "' needs " + std::to_string(sweep.parameters.size()) +
                                                  " comma-separated field(s)");
        }
        for (const auto& f : fields) {
            if (f.empty()) throw ConfigError("sweep.values", "empty field in entry '" + entry + "'");
        }
        sweep.values.push_back(std::move(fields));
    }
    return sweep;
}

CouplingSchedule ResolvedExperiment::make_schedule() const {
    const double t_final = schedule.periods * std::numbers::pi / g0;
    switch (schedule.type) {
        case ScheduleType::Constant: return CouplingSchedule::constant(model.g1, model.g2, t_final);
        case ScheduleType::Adiabatic: return CouplingSchedule::adiabatic_squeeze(g0, schedule.lambda, t_final);
        case ScheduleType::Swap: return CouplingSchedule::resonant_swap(g0, schedule.swap_n);
    }
    throw std::logic_error("make_schedule: bad schedule type");
}

std::vector<ResolvedExperiment> resolve_all(const ExperimentConfig& config) {
    const SweepSpec sweep = sweep_of(config);
    const auto exp = config.sections.find("experiment");
    if (exp == config.sections.end() || !exp->second.count("kind")) {
        throw ConfigError("experiment.kind", "missing required key");
    }
    const ExperimentKind kind = kind_from_string(exp->second.at("kind"));
    const auto allowed = sections_for(kind);
    for (const auto& [section, keys] : config.sections) {
        if (!keys.empty() && !allowed.count(section)) {
            throw ConfigError(section, "section not used by kind " + to_string(kind));
        }
    }
    for (const auto& name : sweep.parameters) {
        const std::string section = name.substr(0, name.find('.'));
        if (!allowed.count(section)) throw ConfigError("sweep.parameter", "'" + name + "' not used by kind " + to_string(kind));
    }

    std::vector<ResolvedExperiment> out;
    for (std::size_t e = 0; e < sweep.entries(); ++e) {
        ConfigSections sections = config.sections;
        ResolvedExperiment r;
        if (!sweep.values.empty()) {
            for (std::size_t p = 0; p < sweep.parameters.size(); ++p) {
                const auto& name = sweep.parameters[p];
                const auto dot = name.find('.');
                sections[name.substr(0, dot)][name.substr(dot + 1)] = sweep.values[e][p];
                r.sweep_values.emplace_back(name, sweep.values[e][p]);
            }
        }
        Reader rd(sections, r.echo);
        r.kind = kind;
        r.output = rd.text("experiment", "output", "experiment");
        for (char c : r.output) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
                throw ConfigError("experiment.output", "use letters, digits, '_', '-' or '.' only");
            }
        }
        if (r.output.empty() || r.output.front() == '.') {
            throw ConfigError("experiment.output", "must be a plain, non-hidden file stem");
        }
        rd.text("experiment", "kind", to_string(kind));
        resolve_schedule(rd, r);
        resolve_model(rd, r);
        resolve_schedule_rates(rd, r);
        resolve_grid(rd, r);
        resolve_filter(rd, r);
        resolve_scan(rd, r);
        resolve_stationary(rd, r);
        resolve_discrete(rd, r);
        resolve_oracle(rd, r);
        if (r.kind == ExperimentKind::TimeSeries) {
            try {
                const CouplingSchedule s = r.make_schedule();
                rd.derived("t_final", s.t_final());
            } catch (const std::invalid_argument& e) {
                throw ConfigError("schedule", e.what());
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace optoment
