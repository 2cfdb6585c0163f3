#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pplab/sim_core.hpp"
#include "pplab/strategy_set.hpp"

namespace pplab {

/// Population figures a reproducing agent sees. Frozen at the start of a tick.
struct ReproductionContext {
    long long n_self = 0;
    long long n_other = 0;
    /// Change of the other species over the last completed tick; 0 until two
    /// history samples exist.
    long long dn_other = 0;
    /// The other species' count one tick earlier (equals n_other when unknown).
    long long prev_other = 0;
    double base_rate = 0.0;
};

/// Builds the context for `species` from the world's population history.
ReproductionContext make_reproduction_context(const PopulationHistory& history, Species species,
                                              double base_rate);

/// Per-agent reproduction probability under the enabled rules, always in [0, 1].
///
/// Order of application for the agent's species:
///  1. altruistic gate: 0 whenever the own species outnumbers the other;
///  2. fraction rule:   base_rate * n_other / (n_self + n_other);
///  3. predictive rule, with dn = max(0, dn_other): scale * dn / max(1, prev_other)
///     in the relative form, scale * base_rate * dn in the absolute form,
///     scale * base_rate * |dn_other| in the magnitude form;
///  4. otherwise base_rate.
double reproduction_probability(const ReproductionContext& ctx, Species species,
                                const StrategySet& strategies);

/// Bucketed positions of a set of agents for radius queries on the torus.
class CellIndex {
public:
    CellIndex() = default;
    CellIndex(std::span<const Agent> agents, int width, int height) { rebuild(agents, width, height); }

    void rebuild(std::span<const Agent> agents, int width, int height);

    /// Calls fn(index, dx, dy) for every indexed agent whose wrapped offset
    /// (dx, dy) from (x, y) satisfies dx^2 + dy^2 <= radius^2.
    template <class Fn>
    void for_each_within(int x, int y, double radius, Fn&& fn) const;

    /// Same disc, one call fn(count, dx, dy) per cell instead of per agent.
    template <class Fn>
    void for_each_cell_within(int x, int y, double radius, Fn&& fn) const;

    /// Indices of the agents in cell (x, y).
    std::span<const std::uint32_t> cell(int x, int y) const {
        const auto c = static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                       static_cast<std::size_t>(x);
        return {entries_.data() + offsets_[c], entries_.data() + offsets_[c + 1]};
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> entries_;
};

/// Heading of a flocking sheep: turned by at most flock_cohere_turn degrees
/// toward the centroid of the other sheep within flock_radius, as indexed
/// by `index`.
double flocking_heading(const Agent& agent, const CellIndex& index, const StrategySet& strategies);

/// Convenience overload indexing the world's sheep on the fly.
double flocking_heading(const Agent& agent, const WorldState& world, const SimConfig& config);

/// Sheep sacrifice for a lone wolf. Active when sheep_altruistic is set,
/// exactly one wolf is alive and more than one sheep. Returns the index of
/// the sheep nearest that wolf (torus metric, lowest id on ties).
std::optional<std::size_t> sacrifice_candidate(const WorldState& world, const SimConfig& config);

/// One king-move step of `agent` toward `target`'s cell, turning to face it.
/// No-op when both share a cell.
void step_toward(Agent& agent, const Agent& target, int width, int height);

/// The sacrificing sheep (see sacrifice_candidate) steps toward the lone wolf.
/// Returns its id, or nullopt when the rule is inactive.
std::optional<std::uint64_t> sacrifice_move(WorldState& world, const SimConfig& config);

// ---------------------------------------------------------------------------

template <class Fn>
void CellIndex::for_each_within(int x, int y, double radius, Fn&& fn) const {
    for_each_cell_within(x, y, radius, [&](std::size_t, int dx, int dy) {
        int cx = (x + dx) % width_;
        if (cx < 0) cx += width_;
        int cy = (y + dy) % height_;
        if (cy < 0) cy += height_;
        for (auto idx : cell(cx, cy)) fn(idx, dx, dy);
    });
}

template <class Fn>
void CellIndex::for_each_cell_within(int x, int y, double radius, Fn&& fn) const {
    const int reach = static_cast<int>(radius);
    const double r2 = radius * radius;
    // Never visit a wrapped cell twice on small grids.
    const int reach_x = std::min(reach, (width_ - 1) / 2);
    const int reach_y = std::min(reach, (height_ - 1) / 2);
    for (int dy = -reach_y; dy <= reach_y; ++dy) {
        for (int dx = -reach_x; dx <= reach_x; ++dx) {
            if (static_cast<double>(dx * dx + dy * dy) > r2) continue;
            int cx = (x + dx) % width_;
            if (cx < 0) cx += width_;
            int cy = (y + dy) % height_;
            if (cy < 0) cy += height_;
            fn(cell(cx, cy).size(), dx, dy);
        }
    }
}

}  // namespace pplab
