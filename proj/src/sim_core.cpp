#include "pplab/sim_core.hpp"

#include <cmath>
#include <sstream>

namespace pplab {

std::string Rng::state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

std::string_view to_string(Species s) noexcept {
    return s == Species::Sheep ? "sheep" : "wolf";
}

std::string_view to_string(OutcomeClass c) noexcept {
    switch (c) {
        case OutcomeClass::E1: return "E1";
        case OutcomeClass::E2: return "E2";
        case OutcomeClass::E3: return "E3";
    }
    return "?";
}

OutcomeClass outcome_from_string(std::string_view s) {
    if (s == "E1") return OutcomeClass::E1;
    if (s == "E2") return OutcomeClass::E2;
    if (s == "E3") return OutcomeClass::E3;
    throw std::invalid_argument("unknown outcome class '" + std::string(s) + "'");
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

}  // namespace

void SimConfig::validate() const {
    require(grid_width > 0 && grid_height > 0, "grid_width and grid_height must be positive");
    require(initial_sheep >= 0 && initial_wolves >= 0, "initial populations must be non-negative");
    require(static_cast<double>(initial_sheep) + initial_wolves <=
                kMaxInitialDensity * static_cast<double>(cells()),
            "initial population exceeds the density bound of " +
                std::to_string(static_cast<int>(kMaxInitialDensity)) + " agents per cell");
    require(is_probability(sheep_reproduce_rate), "sheep_reproduce_rate must lie in [0, 1]");
    require(is_probability(wolf_reproduce_rate), "wolf_reproduce_rate must lie in [0, 1]");
    require(std::isfinite(wolf_gain_from_food) && wolf_gain_from_food > 0.0,
            "wolf_gain_from_food must be positive");
    require(std::isfinite(wolf_energy_loss_per_tick) && wolf_energy_loss_per_tick >= 0.0,
            "wolf_energy_loss_per_tick must be non-negative");
    require(max_ticks > 0, "max_ticks must be positive");
    require(sheep_cap > 0, "sheep_cap must be positive");
    require(population_cap > 0, "population_cap must be positive");
    require(std::isfinite(wiggle_right) && wiggle_right >= 0.0 && wiggle_right <= 360.0,
            "wiggle_right must lie in [0, 360]");
    require(std::isfinite(wiggle_left) && wiggle_left >= 0.0 && wiggle_left <= 360.0,
            "wiggle_left must lie in [0, 360]");
    require(trajectory_interval >= 0, "trajectory_interval must be non-negative");

    const auto& s = strategies;
    require(!(s.wolves_fraction_reproduce && s.wolves_predictive),
            "wolves_fraction_reproduce and wolves_predictive are mutually exclusive");
    require(!(s.sheep_fraction_reproduce && s.sheep_predictive),
            "sheep_fraction_reproduce and sheep_predictive are mutually exclusive");
    require(std::isfinite(s.predictive_scale) && s.predictive_scale > 0.0,
            "predictive_scale must be positive");
    require(std::isfinite(s.flock_radius) && s.flock_radius > 0.0, "flock_radius must be positive");
    require(std::isfinite(s.flock_cohere_turn) && s.flock_cohere_turn >= 0.0 &&
                s.flock_cohere_turn <= 180.0,
            "flock_cohere_turn must lie in [0, 180]");
}

void PopulationHistory::record(long long sheep, long long wolves) {
    const int tick = samples_.empty() ? 0 : samples_.back().tick + 1;
    samples_.push_back({tick, sheep, wolves});
}

std::optional<PopulationSample> PopulationHistory::previous() const {
    if (samples_.size() < 2) return std::nullopt;
    return samples_[samples_.size() - 2];
}

std::optional<OutcomeClass> classify(const WorldState& world, const SimConfig& config) {
    const auto sheep = world.sheep_count();
    const auto wolves = world.wolf_count();
    if (sheep == 0) return OutcomeClass::E1;
    if (wolves == 0) return OutcomeClass::E2;
    if (world.tick >= config.max_ticks) return OutcomeClass::E3;
    return std::nullopt;
}

WorldState init_world(const SimConfig& config) {
    config.validate();

    WorldState world;
    world.rng = Rng(config.seed);
    auto& rng = world.rng;

    auto place = [&](Species species) {
        Agent a;
        a.id = world.next_id++;
        a.species = species;
        a.x = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.grid_width)));
        a.y = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.grid_height)));
        a.heading = rng.uniform(0.0, 360.0);
        return a;
    };

    world.sheep.reserve(static_cast<std::size_t>(config.initial_sheep));
    for (int i = 0; i < config.initial_sheep; ++i) world.sheep.push_back(place(Species::Sheep));

    world.wolves.reserve(static_cast<std::size_t>(config.initial_wolves));
    for (int i = 0; i < config.initial_wolves; ++i) {
        Agent w = place(Species::Wolf);
        w.energy = rng.uniform(0.0, 2.0 * config.wolf_gain_from_food);
        world.wolves.push_back(w);
    }

    world.history.record(world.sheep_count(), world.wolf_count());
    return world;
}

std::string serialize(const WorldState& world) {
    std::ostringstream os;
    os << std::hexfloat;
    os << "tick " << world.tick << " next_id " << world.next_id << '\n';
    auto dump = [&](const std::vector<Agent>& agents) {
        for (const auto& a : agents) {
            os << a.id << ' ' << to_string(a.species) << ' ' << a.x << ' ' << a.y << ' '
               << a.heading << ' ' << a.energy << '\n';
        }
    };
    os << "sheep " << world.sheep.size() << '\n';
    dump(world.sheep);
    os << "wolves " << world.wolves.size() << '\n';
    dump(world.wolves);
    os << "history " << world.history.size() << '\n';
    for (const auto& s : world.history.samples()) {
        os << s.tick << ' ' << s.sheep << ' ' << s.wolves << '\n';
    }
    os << "rng " << world.rng.state() << '\n';
    return os.str();
}

}  // namespace pplab
