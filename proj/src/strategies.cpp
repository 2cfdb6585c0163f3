#include "pplab/strategies.hpp"

#include <cmath>
#include <limits>

#include "pplab/torus.hpp"

namespace pplab {

std::string_view to_string(PredictiveForm form) noexcept {
    switch (form) {
        case PredictiveForm::Absolute: return "absolute";
        case PredictiveForm::Magnitude: return "magnitude";
        case PredictiveForm::Relative: break;
    }
    return "relative";
}

std::optional<PredictiveForm> predictive_form_from_string(std::string_view text) noexcept {
    if (text == "relative") return PredictiveForm::Relative;
    if (text == "absolute") return PredictiveForm::Absolute;
    if (text == "magnitude") return PredictiveForm::Magnitude;
    return std::nullopt;
}

ReproductionContext make_reproduction_context(const PopulationHistory& history, Species species,
                                              double base_rate) {
    ReproductionContext ctx;
    ctx.base_rate = base_rate;
    if (history.empty()) return ctx;

    const auto& now = history.back();
    const bool sheep = species == Species::Sheep;
    ctx.n_self = sheep ? now.sheep : now.wolves;
    ctx.n_other = sheep ? now.wolves : now.sheep;
    ctx.prev_other = ctx.n_other;
    if (const auto prev = history.previous()) {
        ctx.prev_other = sheep ? prev->wolves : prev->sheep;
        ctx.dn_other = ctx.n_other - ctx.prev_other;
    }
    return ctx;
}

double reproduction_probability(const ReproductionContext& ctx, Species species,
                                const StrategySet& s) {
    const bool sheep = species == Species::Sheep;
    const bool altruistic = sheep ? s.sheep_altruistic : s.wolves_altruistic;
    const bool fraction = sheep ? s.sheep_fraction_reproduce : s.wolves_fraction_reproduce;
    const bool predictive = sheep ? s.sheep_predictive : s.wolves_predictive;

    if (altruistic && ctx.n_self > ctx.n_other) return 0.0;

    double p = ctx.base_rate;
    if (fraction) {
        const long long total = ctx.n_self + ctx.n_other;
        p = total > 0 ? ctx.base_rate * static_cast<double>(ctx.n_other) / static_cast<double>(total)
                      : 0.0;
    } else if (predictive) {
        const double growth = static_cast<double>(std::max(0LL, ctx.dn_other));
        if (s.predictive_form == PredictiveForm::Absolute) {
            p = s.predictive_scale * ctx.base_rate * growth;
        } else if (s.predictive_form == PredictiveForm::Magnitude) {
            p = s.predictive_scale * ctx.base_rate * static_cast<double>(std::abs(ctx.dn_other));
        } else {
            const double prev = static_cast<double>(std::max(1LL, ctx.prev_other));
            p = s.predictive_scale * growth / prev;
        }
    }
    if (!(p > 0.0)) return 0.0;
    return std::min(p, 1.0);
}

void CellIndex::rebuild(std::span<const Agent> agents, int width, int height) {
    width_ = width;
    height_ = height;
    const auto n_cells = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    offsets_.assign(n_cells + 1, 0);
    for (const auto& a : agents) {
        ++offsets_[static_cast<std::size_t>(a.y) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(a.x) + 1];
    }
    for (std::size_t c = 0; c < n_cells; ++c) offsets_[c + 1] += offsets_[c];

    entries_.resize(agents.size());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto c = static_cast<std::size_t>(agents[i].y) * static_cast<std::size_t>(width) +
                       static_cast<std::size_t>(agents[i].x);
        entries_[fill[c]++] = static_cast<std::uint32_t>(i);
    }
}

double flocking_heading(const Agent& agent, const CellIndex& index, const StrategySet& strategies) {
    // The agent itself sits at offset (0, 0), so it never moves the centroid;
    // per-cell counts give the same sums as visiting every neighbour.
    long long sum_dx = 0;
    long long sum_dy = 0;
    index.for_each_cell_within(agent.x, agent.y, strategies.flock_radius,
                               [&](std::size_t count, int dx, int dy) {
                                   sum_dx += static_cast<long long>(count) * dx;
                                   sum_dy += static_cast<long long>(count) * dy;
                               });
    if (sum_dx == 0 && sum_dy == 0) return agent.heading;

    const double target = torus::bearing(static_cast<double>(sum_dx), static_cast<double>(sum_dy));
    const double turn = torus::turn_between(agent.heading, target);
    const double limit = strategies.flock_cohere_turn;
    return torus::normalize_heading(agent.heading + std::clamp(turn, -limit, limit));
}

double flocking_heading(const Agent& agent, const WorldState& world, const SimConfig& config) {
    const CellIndex index(world.sheep, config.grid_width, config.grid_height);
    return flocking_heading(agent, index, config.strategies);
}

std::optional<std::size_t> sacrifice_candidate(const WorldState& world, const SimConfig& config) {
    if (!config.strategies.sheep_altruistic) return std::nullopt;
    if (world.wolves.size() != 1 || world.sheep.size() <= 1) return std::nullopt;

    const Agent& wolf = world.wolves.front();
    std::optional<std::size_t> nearest;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < world.sheep.size(); ++i) {
        const auto& s = world.sheep[i];
        const double d =
            torus::distance(s.x, s.y, wolf.x, wolf.y, config.grid_width, config.grid_height);
        if (d < best || (d == best && s.id < world.sheep[*nearest].id)) {
            best = d;
            nearest = i;
        }
    }
    return nearest;
}

void step_toward(Agent& agent, const Agent& target, int width, int height) {
    const int dx = torus::delta(agent.x, target.x, width);
    const int dy = torus::delta(agent.y, target.y, height);
    if (dx == 0 && dy == 0) return;
    agent.heading = torus::bearing(dx, dy);
    agent.x = torus::wrap(agent.x + (dx > 0) - (dx < 0), width);
    agent.y = torus::wrap(agent.y + (dy > 0) - (dy < 0), height);
}

std::optional<std::uint64_t> sacrifice_move(WorldState& world, const SimConfig& config) {
    const auto i = sacrifice_candidate(world, config);
    if (!i) return std::nullopt;
    Agent& sheep = world.sheep[*i];
    step_toward(sheep, world.wolves.front(), config.grid_width, config.grid_height);
    return sheep.id;
}

}  // namespace pplab
