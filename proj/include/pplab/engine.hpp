#pragma once

#include <algorithm>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "pplab/sim_core.hpp"

namespace pplab {

/// Book-keeping for one tick. Deaths count predation for sheep and
/// starvation for wolves.
struct TickReport {
    int tick = 0;  ///< tick number after the step completed
    long long sheep_births = 0;
    long long sheep_deaths = 0;
    long long wolf_births = 0;
    long long wolf_deaths = 0;
    long long predation_events = 0;

    friend bool operator==(const TickReport&, const TickReport&) = default;
};

/// Thrown when step() is called on a world that is no longer running.
class FinishedRunError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Advances a running world by one tick:
///  1. pick the sacrificing sheep (lone wolf, altruistic sheep);
///  2. sheep in random order: move, then reproduce; the sacrificing sheep
///     does not make its normal move;
///  3. wolves in random order: move, pay the energy cost, let the
///     sacrificing sheep step toward the wolf, eat at most one sheep in the
///     cell, starve below zero energy, else reproduce;
///  4. record the new counts.
/// Reproduction probabilities use the counts frozen at the start of the tick.
TickReport step(WorldState& world, const SimConfig& config);

/// init_world followed by step() until the outcome is decided. Runs that end
/// in E2 keep going (prey-only growth) until the sheep cap or the horizon so
/// the final counts show the unbounded-prey state; the absorption tick is
/// still the tick of wolf extinction.
///
/// A run whose live population reaches population_cap with both species
/// alive stops there and is marked capped. With prey that abundant no wolf
/// starves, so the species with the larger birth probability outgrows the
/// other: wolves ahead means the prey is eventually eaten out (E1), sheep
/// ahead means unbounded prey growth (E2).
RunOutcome run_single(const SimConfig& config);

/// Same as run_single, also handing every TickReport to `on_tick`.
template <class OnTick>
RunOutcome run_single(const SimConfig& config, OnTick&& on_tick);

/// CSV `tick,sheep,wolves`, preceded by the resolved config as `#` comments.
void write_trajectory_csv(std::ostream& os, const SimConfig& config,
                          const std::vector<PopulationSample>& samples);

namespace detail {
/// step() without the running-state precondition.
TickReport advance(WorldState& world, const SimConfig& config);
/// Outcome of a run stopped at population_cap, see run_single.
OutcomeClass capped_outcome(const WorldState& world, const SimConfig& config);
RunOutcome finish_run(WorldState& world, const SimConfig& config, OutcomeClass outcome,
                      int absorption_tick, long long peak_sheep, long long peak_wolves,
                      std::vector<PopulationSample> trajectory, bool capped = false);
}  // namespace detail

template <class OnTick>
RunOutcome run_single(const SimConfig& config, OnTick&& on_tick) {
    WorldState world = init_world(config);
    const int interval = config.trajectory_interval;
    std::vector<PopulationSample> trajectory;
    auto sample = [&] {
        if (interval > 0 && world.tick % interval == 0) trajectory.push_back(world.history.back());
    };
    sample();

    long long peak_sheep = world.sheep_count();
    long long peak_wolves = world.wolf_count();
    auto outcome = classify(world, config);
    while (!outcome) {
        on_tick(detail::advance(world, config));
        peak_sheep = std::max(peak_sheep, world.sheep_count());
        peak_wolves = std::max(peak_wolves, world.wolf_count());
        sample();
        outcome = classify(world, config);
        if (!outcome && world.sheep_count() + world.wolf_count() >= config.population_cap) {
            return detail::finish_run(world, config, detail::capped_outcome(world, config),
                                      world.tick, peak_sheep, peak_wolves, std::move(trajectory),
                                      true);
        }
    }
    const int absorption = world.tick;

    if (*outcome == OutcomeClass::E2) {
        while (world.sheep_count() < config.sheep_cap && world.tick < config.max_ticks) {
            on_tick(detail::advance(world, config));
            sample();
        }
    }
    return detail::finish_run(world, config, *outcome, absorption, peak_sheep, peak_wolves,
                              std::move(trajectory));
}

}  // namespace pplab
