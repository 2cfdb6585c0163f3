#include "pplab/engine.hpp"

#include <numeric>
#include <ostream>

#include "pplab/config_io.hpp"
#include "pplab/strategies.hpp"
#include "pplab/torus.hpp"

namespace pplab {

namespace {

void shuffle(std::vector<std::uint32_t>& order, Rng& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(order[i - 1], order[j]);
    }
}

std::vector<std::uint32_t> random_order(std::size_t n, Rng& rng) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0U);
    shuffle(order, rng);
    return order;
}

void forward(Agent& a, int width, int height) {
    const auto s = torus::step_for(a.heading);
    a.x = torus::wrap(a.x + s.dx, width);
    a.y = torus::wrap(a.y + s.dy, height);
}

void wiggle(Agent& a, const SimConfig& config, Rng& rng) {
    const double right = rng.uniform(0.0, config.wiggle_right);
    const double left = rng.uniform(0.0, config.wiggle_left);
    a.heading = torus::normalize_heading(a.heading + right - left);
}

Agent offspring_of(const Agent& parent, WorldState& world, const SimConfig& config) {
    Agent child = parent;
    child.id = world.next_id++;
    child.heading = torus::normalize_heading(parent.heading + world.rng.uniform(0.0, 360.0));
    forward(child, config.grid_width, config.grid_height);
    return child;
}

}  // namespace

namespace detail {

TickReport advance(WorldState& world, const SimConfig& config) {
    TickReport report;
    const int w = config.grid_width;
    const int h = config.grid_height;
    auto& rng = world.rng;
    const auto& strategies = config.strategies;

    const double p_sheep = reproduction_probability(
        make_reproduction_context(world.history, Species::Sheep, config.sheep_reproduce_rate),
        Species::Sheep, strategies);
    const double p_wolf = reproduction_probability(
        make_reproduction_context(world.history, Species::Wolf, config.wolf_reproduce_rate),
        Species::Wolf, strategies);

    // The sacrificing sheep skips its own move and walks to the lone wolf
    // once the wolf has moved, so it can be eaten this tick.
    const auto sacrificer = sacrifice_candidate(world, config);

    // Sheep phase. Flocking reads neighbour positions as of the phase start.
    {
        CellIndex flock_index;
        if (strategies.sheep_flocking) flock_index.rebuild(world.sheep, w, h);
        std::vector<Agent> born;
        for (const auto i : random_order(world.sheep.size(), rng)) {
            Agent& s = world.sheep[i];
            if (!(sacrificer && *sacrificer == i)) {
                if (strategies.sheep_flocking) {
                    s.heading = flocking_heading(s, flock_index, strategies);
                } else {
                    wiggle(s, config, rng);
                }
                forward(s, w, h);
            }
            if (p_sheep > 0.0 && rng.bernoulli(p_sheep)) born.push_back(offspring_of(s, world, config));
        }
        report.sheep_births = static_cast<long long>(born.size());
        world.sheep.insert(world.sheep.end(), born.begin(), born.end());
    }

    // Wolf phase.
    if (!world.wolves.empty()) {
        CellIndex prey_index(world.sheep, w, h);
        std::vector<char> sheep_alive(world.sheep.size(), 1);
        std::vector<char> wolf_alive(world.wolves.size(), 1);
        std::vector<Agent> born;
        std::vector<std::uint32_t> candidates;

        for (const auto i : random_order(world.wolves.size(), rng)) {
            Agent& wolf = world.wolves[i];
            wiggle(wolf, config, rng);
            forward(wolf, w, h);
            wolf.energy -= config.wolf_energy_loss_per_tick;
            if (sacrificer) {
                step_toward(world.sheep[*sacrificer], wolf, w, h);
                prey_index.rebuild(world.sheep, w, h);
            }

            candidates.clear();
            for (const auto s : prey_index.cell(wolf.x, wolf.y)) {
                if (sheep_alive[s]) candidates.push_back(s);
            }
            if (!candidates.empty()) {
                const auto victim = candidates[rng.below(candidates.size())];
                sheep_alive[victim] = 0;
                wolf.energy += config.wolf_gain_from_food;
                ++report.predation_events;
            }

            if (wolf.energy < 0.0) {
                wolf_alive[i] = 0;
                ++report.wolf_deaths;
                continue;
            }
            if (p_wolf > 0.0 && rng.bernoulli(p_wolf)) {
                wolf.energy /= 2.0;
                born.push_back(offspring_of(wolf, world, config));
            }
        }

        auto compact = [](std::vector<Agent>& agents, const std::vector<char>& alive) {
            std::size_t out = 0;
            for (std::size_t k = 0; k < agents.size(); ++k) {
                if (alive[k]) agents[out++] = agents[k];
            }
            agents.resize(out);
        };
        compact(world.sheep, sheep_alive);
        compact(world.wolves, wolf_alive);
        report.sheep_deaths = report.predation_events;
        report.wolf_births = static_cast<long long>(born.size());
        world.wolves.insert(world.wolves.end(), born.begin(), born.end());
    }

    ++world.tick;
    world.history.record(world.sheep_count(), world.wolf_count());
    report.tick = world.tick;
    return report;
}

OutcomeClass capped_outcome(const WorldState& world, const SimConfig& config) {
    const double p_sheep = reproduction_probability(
        make_reproduction_context(world.history, Species::Sheep, config.sheep_reproduce_rate),
        Species::Sheep, config.strategies);
    const double p_wolf = reproduction_probability(
        make_reproduction_context(world.history, Species::Wolf, config.wolf_reproduce_rate),
        Species::Wolf, config.strategies);
    return p_wolf > p_sheep ? OutcomeClass::E1 : OutcomeClass::E2;
}

RunOutcome finish_run(WorldState& world, const SimConfig& config, OutcomeClass outcome,
                      int absorption_tick, long long peak_sheep, long long peak_wolves,
                      std::vector<PopulationSample> trajectory, bool capped) {
    RunOutcome out;
    out.outcome = outcome;
    out.capped = capped;
    out.final_sheep = world.sheep_count();
    out.final_wolves = world.wolf_count();
    out.absorption_tick = absorption_tick;
    out.final_tick = world.tick;
    out.seed = config.seed;
    out.peak_sheep = peak_sheep;
    out.peak_wolves = peak_wolves;
    if (config.trajectory_interval > 0 && (trajectory.empty() || trajectory.back().tick != world.tick)) {
        trajectory.push_back(world.history.back());
    }
    out.trajectory = std::move(trajectory);
    return out;
}

}  // namespace detail

TickReport step(WorldState& world, const SimConfig& config) {
    if (const auto done = classify(world, config)) {
        throw FinishedRunError("step() called on a finished run (outcome " +
                               std::string(to_string(*done)) + " at tick " +
                               std::to_string(world.tick) + ")");
    }
    return detail::advance(world, config);
}

RunOutcome run_single(const SimConfig& config) {
    return run_single(config, [](const TickReport&) {});
}

void write_trajectory_csv(std::ostream& os, const SimConfig& config,
                          const std::vector<PopulationSample>& samples) {
    os << format_config(config, "# ");
    os << "tick,sheep,wolves\n";
    for (const auto& s : samples) os << s.tick << ',' << s.sheep << ',' << s.wolves << '\n';
}

}  // namespace pplab
