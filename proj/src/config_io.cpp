#include "pplab/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "pplab/format.hpp"

namespace pplab {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
    throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) +
                      "': expected " + std::string(want));
}

template <class Int>
Int parse_int(std::string_view key, std::string_view value) {
    Int out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) bad_value(key, value, "an integer");
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    double out{};
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) bad_value(key, value, "a number");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(key, value, "true or false");
}

struct Field {
    std::string_view key;
    std::function<void(SimConfig&, std::string_view key, std::string_view)> set;
    std::function<std::string(const SimConfig&)> get;
};

template <class T>
Field int_field(std::string_view key, T SimConfig::*member) {
    return {key, [member](SimConfig& c, std::string_view k, std::string_view v) {
                c.*member = parse_int<T>(k, v);
            },
            [member](const SimConfig& c) { return std::to_string(c.*member); }};
}

Field real_field(std::string_view key, double SimConfig::*member) {
    return {key, [member](SimConfig& c, std::string_view k, std::string_view v) {
                c.*member = parse_double(k, v);
            },
            [member](const SimConfig& c) { return format_number(c.*member); }};
}

Field flag_field(std::string_view key, bool StrategySet::*member) {
    return {key, [member](SimConfig& c, std::string_view k, std::string_view v) {
                c.strategies.*member = parse_bool(k, v);
            },
            [member](const SimConfig& c) {
                return std::string(c.strategies.*member ? "true" : "false");
            }};
}

Field strategy_real_field(std::string_view key, double StrategySet::*member) {
    return {key, [member](SimConfig& c, std::string_view k, std::string_view v) {
                c.strategies.*member = parse_double(k, v);
            },
            [member](const SimConfig& c) { return format_number(c.strategies.*member); }};
}

Field predictive_form_field() {
    return {"predictive_form",
            [](SimConfig& c, std::string_view k, std::string_view v) {
                const auto form = predictive_form_from_string(v);
                if (!form) bad_value(k, v, "relative, absolute or magnitude");
                c.strategies.predictive_form = *form;
            },
            [](const SimConfig& c) { return std::string(to_string(c.strategies.predictive_form)); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        int_field("grid_width", &SimConfig::grid_width),
        int_field("grid_height", &SimConfig::grid_height),
        int_field("initial_sheep", &SimConfig::initial_sheep),
        int_field("initial_wolves", &SimConfig::initial_wolves),
        real_field("sheep_reproduce_rate", &SimConfig::sheep_reproduce_rate),
        real_field("wolf_reproduce_rate", &SimConfig::wolf_reproduce_rate),
        real_field("wolf_gain_from_food", &SimConfig::wolf_gain_from_food),
        real_field("wolf_energy_loss_per_tick", &SimConfig::wolf_energy_loss_per_tick),
        int_field("max_ticks", &SimConfig::max_ticks),
        int_field("sheep_cap", &SimConfig::sheep_cap),
        int_field("population_cap", &SimConfig::population_cap),
        int_field("seed", &SimConfig::seed),
        real_field("wiggle_right", &SimConfig::wiggle_right),
        real_field("wiggle_left", &SimConfig::wiggle_left),
        int_field("trajectory_interval", &SimConfig::trajectory_interval),
        flag_field("sheep_flocking", &StrategySet::sheep_flocking),
        flag_field("wolves_fraction_reproduce", &StrategySet::wolves_fraction_reproduce),
        flag_field("sheep_fraction_reproduce", &StrategySet::sheep_fraction_reproduce),
        flag_field("wolves_altruistic", &StrategySet::wolves_altruistic),
        flag_field("sheep_altruistic", &StrategySet::sheep_altruistic),
        flag_field("wolves_predictive", &StrategySet::wolves_predictive),
        flag_field("sheep_predictive", &StrategySet::sheep_predictive),
        strategy_real_field("predictive_scale", &StrategySet::predictive_scale),
        predictive_form_field(),
        strategy_real_field("flock_radius", &StrategySet::flock_radius),
        strategy_real_field("flock_cohere_turn", &StrategySet::flock_cohere_turn),
    };
    return table;
}

const Field& find_field(std::string_view key) {
    const auto& table = fields();
    auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
    return *it;
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> out;
        for (const auto& f : fields()) out.push_back(f.key);
        return out;
    }();
    return keys;
}

bool is_config_key(std::string_view key) {
    const auto& keys = config_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

void set_config_value(SimConfig& config, std::string_view key, std::string_view value) {
    find_field(key).set(config, key, trim(value));
}

std::string get_config_value(const SimConfig& config, std::string_view key) {
    return find_field(key).get(config);
}

SimConfig parse_config(std::string_view text, SimConfig base) {
    std::unordered_set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!seen.insert(std::string(key)).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                              std::string(key) + "'");
        }
        try {
            set_config_value(base, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str(), std::move(base));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string format_config(const SimConfig& config, std::string_view line_prefix) {
    std::string out;
    for (const auto& f : fields()) {
        out += line_prefix;
        out += f.key;
        out += " = ";
        out += f.get(config);
        out += '\n';
    }
    return out;
}

}  // namespace pplab
