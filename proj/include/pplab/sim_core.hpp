#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pplab/rng.hpp"
#include "pplab/strategy_set.hpp"

namespace pplab {

/// Raised for any invalid SimConfig, config file or batch specification.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Species : std::uint8_t { Sheep, Wolf };

std::string_view to_string(Species s) noexcept;

struct Agent {
    std::uint64_t id = 0;
    Species species = Species::Sheep;
    int x = 0;
    int y = 0;
    double heading = 0.0;  ///< degrees in [0, 360), 0 = +y
    double energy = 0.0;   ///< wolves only; never read for sheep

    friend bool operator==(const Agent&, const Agent&) = default;
};

/// Average agents per cell allowed at initialization. Cells themselves have
/// no capacity limit.
inline constexpr double kMaxInitialDensity = 100.0;

/// Full parameterization of one discrete run. Defaults are those of the
/// no-grass wolf-sheep predation model.
struct SimConfig {
    int grid_width = 51;
    int grid_height = 51;
    int initial_sheep = 100;
    int initial_wolves = 50;
    double sheep_reproduce_rate = 0.04;
    double wolf_reproduce_rate = 0.05;
    double wolf_gain_from_food = 20.0;
    double wolf_energy_loss_per_tick = 1.0;
    int max_ticks = 5000;
    int sheep_cap = 10000;
    /// Live agents (both species) at which a run with both species alive is
    /// cut and resolved by comparing birth probabilities, see run_single.
    long long population_cap = 1'000'000;
    std::uint64_t seed = 0;
    /// Random wiggle: turn right by U[0, wiggle_right), then left by U[0, wiggle_left).
    double wiggle_right = 50.0;
    double wiggle_left = 50.0;
    /// Trajectory down-sampling interval in ticks; 0 disables the trajectory.
    int trajectory_interval = 0;
    StrategySet strategies;

    long long cells() const noexcept {
        return static_cast<long long>(grid_width) * grid_height;
    }

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct PopulationSample {
    int tick = 0;
    long long sheep = 0;
    long long wolves = 0;

    friend bool operator==(const PopulationSample&, const PopulationSample&) = default;
};

/// One sample per completed tick, starting with tick 0.
class PopulationHistory {
public:
    void record(long long sheep, long long wolves);

    const std::vector<PopulationSample>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const PopulationSample& back() const { return samples_.back(); }
    /// The sample before the last one, if any.
    std::optional<PopulationSample> previous() const;

    friend bool operator==(const PopulationHistory&, const PopulationHistory&) = default;

private:
    std::vector<PopulationSample> samples_;
};

/// State of one run. Owned by a single thread; freely movable between threads.
struct WorldState {
    int tick = 0;
    std::vector<Agent> sheep;
    std::vector<Agent> wolves;
    PopulationHistory history;
    Rng rng;
    std::uint64_t next_id = 0;

    long long sheep_count() const noexcept { return static_cast<long long>(sheep.size()); }
    long long wolf_count() const noexcept { return static_cast<long long>(wolves.size()); }
};

enum class OutcomeClass : std::uint8_t {
    E1,  ///< sheep extinct (wolves follow)
    E2,  ///< wolves extinct, sheep surviving
    E3,  ///< both species alive at the horizon
};

std::string_view to_string(OutcomeClass c) noexcept;
OutcomeClass outcome_from_string(std::string_view s);

struct RunOutcome {
    OutcomeClass outcome = OutcomeClass::E1;
    long long final_sheep = 0;
    long long final_wolves = 0;
    int absorption_tick = 0;
    /// Tick at which the run actually stopped (E2 runs keep growing until the sheep cap).
    int final_tick = 0;
    std::uint64_t seed = 0;
    /// The run hit population_cap with both species alive.
    bool capped = false;
    /// Largest population reached before absorption.
    long long peak_sheep = 0;
    long long peak_wolves = 0;
    /// Down-sampled trajectory; empty unless trajectory_interval > 0.
    std::vector<PopulationSample> trajectory;

    friend bool operator==(const RunOutcome&, const RunOutcome&) = default;
};

/// Outcome class of a world at a tick boundary, or nullopt while running.
std::optional<OutcomeClass> classify(const WorldState& world, const SimConfig& config);

/// Places the initial populations. Deterministic in config.seed.
WorldState init_world(const SimConfig& config);

/// Canonical text form of a world (agents, history, generator state).
std::string serialize(const WorldState& world);

}  // namespace pplab
