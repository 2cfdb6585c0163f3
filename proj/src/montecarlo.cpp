#include "pplab/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "pplab/config_io.hpp"
#include "pplab/engine.hpp"
#include "pplab/format.hpp"
#include "pplab/rng.hpp"

namespace pplab {

void BatchSpec::validate() const {
    config.validate();
    if (n_runs <= 0) throw ConfigError("n_runs must be positive");
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
    return splitmix64(base_seed + index * 0x9e3779b97f4a7c15ULL);
}

double wilson_half_width(long long successes, long long n) noexcept {
    if (n <= 0) return 0.0;
    constexpr double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    return z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
}

BatchStats aggregate(const std::vector<RunOutcome>& outcomes) {
    BatchStats st;
    st.n_runs = static_cast<long long>(outcomes.size());

    double sum_sheep = 0.0, sum_wolves = 0.0;
    double sum_sheep_e3 = 0.0, sum_wolves_e3 = 0.0;
    double sum_abs[3] = {0.0, 0.0, 0.0};
    for (const auto& r : outcomes) {
        sum_sheep += static_cast<double>(r.final_sheep);
        sum_wolves += static_cast<double>(r.final_wolves);
        sum_abs[static_cast<int>(r.outcome)] += r.absorption_tick;
        if (r.capped) ++st.count_capped;
        switch (r.outcome) {
            case OutcomeClass::E1: ++st.count_e1; break;
            case OutcomeClass::E2: ++st.count_e2; break;
            case OutcomeClass::E3:
                ++st.count_e3;
                sum_sheep_e3 += static_cast<double>(r.final_sheep);
                sum_wolves_e3 += static_cast<double>(r.final_wolves);
                break;
        }
    }
    if (st.n_runs == 0) return st;

    const double n = static_cast<double>(st.n_runs);
    st.fractions = {st.count_e1 / n, st.count_e2 / n, st.count_e3 / n};
    st.ci95 = {wilson_half_width(st.count_e1, st.n_runs), wilson_half_width(st.count_e2, st.n_runs),
               wilson_half_width(st.count_e3, st.n_runs)};
    st.mean_final_sheep = sum_sheep / n;
    st.mean_final_wolves = sum_wolves / n;
    if (st.count_e3 > 0) {
        st.mean_final_sheep_e3 = sum_sheep_e3 / static_cast<double>(st.count_e3);
        st.mean_final_wolves_e3 = sum_wolves_e3 / static_cast<double>(st.count_e3);
    }
    const long long counts[3] = {st.count_e1, st.count_e2, st.count_e3};
    std::optional<double>* means[3] = {&st.mean_absorption_e1, &st.mean_absorption_e2,
                                       &st.mean_absorption_e3};
    for (int k = 0; k < 3; ++k) {
        if (counts[k] > 0) *means[k] = sum_abs[k] / static_cast<double>(counts[k]);
    }
    return st;
}

std::vector<RunOutcome> run_batch_outcomes(const BatchSpec& spec) {
    spec.validate();

    const auto n = static_cast<std::size_t>(spec.n_runs);
    std::vector<RunOutcome> results(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                SimConfig cfg = spec.config;
                cfg.seed = derive_seed(spec.base_seed, i);
                results[i] = run_single(cfg);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };

    const auto workers = static_cast<std::size_t>(std::max(1, spec.parallelism));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(std::min(workers, n));
        for (std::size_t t = 0; t < std::min(workers, n); ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

BatchStats run_batch(const BatchSpec& spec) { return aggregate(run_batch_outcomes(spec)); }

std::vector<ComparisonRow> compare_strategies(const std::vector<NamedSpec>& specs) {
    if (specs.size() < 2) throw ConfigError("compare needs at least two specs");
    for (const auto& s : specs) s.spec.validate();

    std::vector<ComparisonRow> rows;
    rows.reserve(specs.size());
    for (const auto& s : specs) rows.push_back({s.name, run_batch(s.spec)});
    return rows;
}

nlohmann::ordered_json config_to_json(const SimConfig& config) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto key : config_keys()) {
        const std::string text = get_config_value(config, key);
        if (text == "true" || text == "false") {
            out[std::string(key)] = text == "true";
        } else if (key == "predictive_form") {
            out[std::string(key)] = text;
        } else if (key == "seed") {
            out[std::string(key)] = config.seed;
        } else if (text.find_first_of(".eE") == std::string::npos && text != "inf" && text != "nan") {
            out[std::string(key)] = std::stoll(text);
        } else {
            out[std::string(key)] = std::stod(text);
        }
    }
    return out;
}

namespace {

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string optional_text(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

nlohmann::ordered_json batch_to_json(const BatchSpec& spec, const BatchStats& st) {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(spec.config);
    j["base_seed"] = spec.base_seed;
    j["n_runs"] = st.n_runs;
    j["counts"] = {{"e1", st.count_e1},
                   {"e2", st.count_e2},
                   {"e3", st.count_e3},
                   {"capped", st.count_capped}};
    j["fractions"] = {{"e1", st.fractions.e1}, {"e2", st.fractions.e2}, {"e3", st.fractions.e3}};
    j["ci95"] = {{"e1", st.ci95.e1}, {"e2", st.ci95.e2}, {"e3", st.ci95.e3}};
    j["mean_final"] = {{"sheep", st.mean_final_sheep},
                       {"wolves", st.mean_final_wolves},
                       {"sheep_e3_only", optional_number(st.mean_final_sheep_e3)},
                       {"wolves_e3_only", optional_number(st.mean_final_wolves_e3)}};
    j["mean_absorption"] = {{"e1", optional_number(st.mean_absorption_e1)},
                            {"e2", optional_number(st.mean_absorption_e2)}};
    return j;
}

void write_runs_csv(std::ostream& os, const BatchSpec& spec, const std::vector<RunOutcome>& runs) {
    os << format_config(spec.config, "# ");
    os << "# base_seed = " << spec.base_seed << '\n';
    os << "run_index,seed,outcome,absorption_tick,final_sheep,final_wolves\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        os << i << ',' << r.seed << ',' << to_string(r.outcome) << ',' << r.absorption_tick << ','
           << r.final_sheep << ',' << r.final_wolves << '\n';
    }
}

void write_comparison_csv(std::ostream& os, const std::vector<NamedSpec>& specs,
                          const std::vector<ComparisonRow>& rows) {
    for (const auto& s : specs) {
        os << "# spec " << s.name << ": n_runs = " << s.spec.n_runs
           << ", base_seed = " << s.spec.base_seed << '\n';
        os << format_config(s.spec.config, "#   ");
    }
    os << "name,n_runs,e1_pct,e2_pct,e3_pct,ci95_e1,ci95_e2,ci95_e3,"
          "mean_sheep,mean_wolves,mean_sheep_e3,mean_wolves_e3\n";
    for (const auto& r : rows) {
        const auto& st = r.stats;
        os << r.name << ',' << st.n_runs << ',' << format_number(100.0 * st.fractions.e1) << ','
           << format_number(100.0 * st.fractions.e2) << ',' << format_number(100.0 * st.fractions.e3)
           << ',' << format_number(st.ci95.e1) << ',' << format_number(st.ci95.e2) << ','
           << format_number(st.ci95.e3) << ',' << format_number(st.mean_final_sheep) << ','
           << format_number(st.mean_final_wolves) << ',' << optional_text(st.mean_final_sheep_e3)
           << ',' << optional_text(st.mean_final_wolves_e3) << '\n';
    }
}

}  // namespace pplab
