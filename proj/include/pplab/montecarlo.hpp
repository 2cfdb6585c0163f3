#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pplab/sim_core.hpp"

namespace pplab {

struct BatchSpec {
    SimConfig config;
    int n_runs = 1000;
    std::uint64_t base_seed = 0;
    /// Worker threads; values < 1 mean one worker.
    int parallelism = 1;

    void validate() const;
};

/// Seed of run `index`: splitmix64(base_seed + index * 0x9e3779b97f4a7c15).
/// The multiplier is odd, so the argument is injective in the index, and
/// splitmix64 is a bijection, so distinct indices always get distinct seeds.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

/// Wilson score interval half-width at 95% for `successes` out of `n`.
double wilson_half_width(long long successes, long long n) noexcept;

struct OutcomeTriple {
    double e1 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
};

struct BatchStats {
    long long n_runs = 0;
    long long count_e1 = 0;
    long long count_e2 = 0;
    long long count_e3 = 0;
    /// Runs stopped at population_cap (already counted in e1 or e2).
    long long count_capped = 0;
    OutcomeTriple fractions;
    OutcomeTriple ci95;  ///< Wilson half-widths
    double mean_final_sheep = 0.0;
    double mean_final_wolves = 0.0;
    /// Means over coexistence (E3) runs only; empty when no run reached E3.
    std::optional<double> mean_final_sheep_e3;
    std::optional<double> mean_final_wolves_e3;
    /// Mean absorption tick per class; empty when the class never occurred.
    std::optional<double> mean_absorption_e1;
    std::optional<double> mean_absorption_e2;
    std::optional<double> mean_absorption_e3;
};

/// Folds run outcomes in index order. The result depends only on the
/// sequence of outcomes, never on how they were produced.
BatchStats aggregate(const std::vector<RunOutcome>& outcomes);

/// Runs spec.n_runs seeded simulations, returned in run-index order.
/// Validates everything before the first run starts.
std::vector<RunOutcome> run_batch_outcomes(const BatchSpec& spec);

BatchStats run_batch(const BatchSpec& spec);

struct NamedSpec {
    std::string name;
    BatchSpec spec;
};

struct ComparisonRow {
    std::string name;
    BatchStats stats;
};

/// One batch per spec, in the given order. Requires at least two specs.
std::vector<ComparisonRow> compare_strategies(const std::vector<NamedSpec>& specs);

// Serialization ------------------------------------------------------------

/// Config as a JSON object with typed values, keys in canonical order.
nlohmann::ordered_json config_to_json(const SimConfig& config);

/// Batch summary: config and batch parameters first, then n_runs, fractions,
/// ci95, mean_final, mean_absorption.
nlohmann::ordered_json batch_to_json(const BatchSpec& spec, const BatchStats& stats);

/// `run_index,seed,outcome,absorption_tick,final_sheep,final_wolves`
/// preceded by the config as `#` comment lines.
void write_runs_csv(std::ostream& os, const BatchSpec& spec, const std::vector<RunOutcome>& runs);

/// One row per compared spec, mirroring the inline comparisons of outcome
/// percentages and coexistence populations.
void write_comparison_csv(std::ostream& os, const std::vector<NamedSpec>& specs,
                          const std::vector<ComparisonRow>& rows);

}  // namespace pplab
