#pragma once

#include <optional>
#include <string_view>

namespace pplab {

/// How the predictive rule turns the other species' last change into a
/// reproduction probability.
enum class PredictiveForm {
    /// scale * dN / N(t-1): growth rate of the other species.
    Relative,
    /// scale * base_rate * dN: base rate per head of increase.
    Absolute,
    /// scale * base_rate * |dN|: base rate per head of change either way.
    Magnitude,
};

std::string_view to_string(PredictiveForm form) noexcept;
std::optional<PredictiveForm> predictive_form_from_string(std::string_view text) noexcept;

/// Behavioural rule toggles. Every flag off reproduces the plain
/// sheep-wolves model.
struct StrategySet {
    bool sheep_flocking = false;             // (i)
    bool wolves_fraction_reproduce = false;  // (ii)
    bool sheep_fraction_reproduce = false;   // (iii)
    bool wolves_altruistic = false;          // (iv)
    bool sheep_altruistic = false;           // (v), includes the sacrifice move
    bool wolves_predictive = false;          // (vi)
    bool sheep_predictive = false;           // (vii); (vi)+(vii) together is (viii)

    /// Proportionality constant of the predictive rule.
    double predictive_scale = 1.0;
    PredictiveForm predictive_form = PredictiveForm::Absolute;
    /// Flocking neighbourhood radius in cells (torus metric).
    double flock_radius = 3.0;
    /// Largest turn toward the local centroid per tick, degrees.
    double flock_cohere_turn = 20.0;

    bool any() const noexcept {
        return sheep_flocking || wolves_fraction_reproduce || sheep_fraction_reproduce ||
               wolves_altruistic || sheep_altruistic || wolves_predictive || sheep_predictive;
    }

    friend bool operator==(const StrategySet&, const StrategySet&) = default;
};

}  // namespace pplab
