// Acceptance suite: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Exits 0 once every criterion has been evaluated; --strict makes
// any FAIL a nonzero exit.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pplab/config_io.hpp"
#include "pplab/engine.hpp"
#include "pplab/lyapunov.hpp"
#include "pplab/montecarlo.hpp"
#include "pplab/ode_lv.hpp"

using namespace pplab;

namespace {

struct Options {
    int runs = 1000;
    int threads = 0;
    std::uint64_t seed = 0;
    bool strict = false;
};

struct Batch {
    BatchStats stats;
    std::vector<RunOutcome> runs;
};

class Suite {
public:
    explicit Suite(Options o) : opt_(o) {}

    Batch batch(const std::string& label, const std::string& rules, int trajectory_interval = 0) {
        BatchSpec spec;
        spec.config = parse_config(rules);
        spec.config.trajectory_interval = trajectory_interval;
        spec.n_runs = opt_.runs;
        spec.base_seed = opt_.seed;
        spec.parallelism = opt_.threads;
        const auto t0 = std::chrono::steady_clock::now();
        Batch b;
        b.runs = run_batch_outcomes(spec);
        b.stats = aggregate(b.runs);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "  batch " << label << ": " << opt_.runs << " runs in " << std::fixed
                  << std::setprecision(1) << secs << " s\n";
        return b;
    }

    void report(int id, const std::string& name, bool pass, const std::string& detail) {
        std::cout << "criterion " << std::setw(2) << id << " " << (pass ? "PASS" : "FAIL") << "  "
                  << name << ": " << detail << std::endl;
        passed_ += pass ? 1 : 0;
        ++total_;
    }

    int passed() const { return passed_; }
    int total() const { return total_; }

private:
    Options opt_;
    int passed_ = 0;
    int total_ = 0;
};

std::string num(double v, int digits = 3) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

std::string fractions(const BatchStats& s) {
    return "E1 " + num(s.fractions.e1) + " E2 " + num(s.fractions.e2) + " E3 " + num(s.fractions.e3);
}

std::string e3_means(const BatchStats& s) {
    if (!s.mean_final_sheep_e3) return "no E3 runs";
    return "E3 means sheep " + num(*s.mean_final_sheep_e3, 1) + " wolves " +
           num(*s.mean_final_wolves_e3, 1);
}

bool within(double v, double centre, double tol) { return std::abs(v - centre) <= tol; }

int default_threads() {
    if (const char* env = std::getenv("PPLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void abm_criteria(Suite& suite) {
    const auto base = suite.batch("baseline", "");
    {
        const auto& s = base.stats;
        const bool ok = s.count_e3 == 0 && within(s.fractions.e1, 0.392, 0.15) &&
                        within(s.fractions.e2, 0.608, 0.15);
        suite.report(1, "baseline", ok, fractions(s) + " (need E3 = 0, E1 0.392+-0.15, E2 0.608+-0.15)");
    }

    const auto alt_w = suite.batch("wolves altruistic", "wolves_altruistic = true");
    {
        const auto& s = alt_w.stats;
        const bool means = s.mean_final_sheep_e3 && *s.mean_final_sheep_e3 >= 50 &&
                           *s.mean_final_sheep_e3 <= 400 && *s.mean_final_wolves_e3 >= 50 &&
                           *s.mean_final_wolves_e3 <= 400;
        const bool ok = s.fractions.e3 >= 0.60 && s.fractions.e2 <= 0.10 && means;
        suite.report(2, "wolves altruistic", ok,
                     fractions(s) + ", " + e3_means(s) + " (need E3 >= 0.60, E2 <= 0.10, means 50-400)");
    }

    const auto alt_s = suite.batch("sheep altruistic", "sheep_altruistic = true");
    {
        const auto& s = alt_s.stats;
        const bool small = s.mean_final_sheep_e3 && *s.mean_final_sheep_e3 < 20 &&
                           *s.mean_final_wolves_e3 < 20;
        suite.report(3, "sheep altruistic", s.fractions.e3 >= 0.50 && small,
                     fractions(s) + ", " + e3_means(s) + " (need E3 >= 0.50, means < 20)");
    }

    const auto alt_both =
        suite.batch("both altruistic", "wolves_altruistic = true\nsheep_altruistic = true");
    suite.report(4, "both altruistic", alt_both.stats.fractions.e3 >= 0.80,
                 fractions(alt_both.stats) + " (need E3 >= 0.80)");

    const auto pred_w = suite.batch("wolves predictive", "wolves_predictive = true");
    suite.report(5, "wolves predictive",
                 pred_w.stats.count_e1 == 0 && pred_w.stats.fractions.e3 >= 0.60,
                 fractions(pred_w.stats) + " (need E1 = 0, E3 >= 0.60)");

    const auto pred_s = suite.batch("sheep predictive", "sheep_predictive = true");
    suite.report(6, "sheep predictive", pred_s.stats.count_e1 == pred_s.stats.n_runs,
                 fractions(pred_s.stats) + ", capped " + std::to_string(pred_s.stats.count_capped) +
                     " (need E1 = 1)");

    // Tick-500 samples tell whether coexistence was already in place then.
    const auto pred_both =
        suite.batch("both predictive", "wolves_predictive = true\nsheep_predictive = true", 500);
    {
        const auto& s = pred_both.stats;
        const auto& ref = alt_both.stats;
        bool bigger = false;
        if (s.mean_final_sheep_e3 && ref.mean_final_sheep_e3) {
            bigger = *s.mean_final_sheep_e3 + *s.mean_final_wolves_e3 >=
                     10.0 * (*ref.mean_final_sheep_e3 + *ref.mean_final_wolves_e3);
        }
        long long alive_500 = 0, alive_500_e3 = 0;
        for (const auto& r : pred_both.runs) {
            for (const auto& p : r.trajectory) {
                if (p.tick == 500 && p.sheep > 0 && p.wolves > 0) {
                    ++alive_500;
                    if (r.outcome == OutcomeClass::E3) ++alive_500_e3;
                }
            }
        }
        // Established: every E3 run was already coexisting at tick 500 and
        // none of the runs coexisting then was lost afterwards.
        const bool early = s.count_e3 > 0 && alive_500_e3 == s.count_e3 && alive_500 == alive_500_e3;
        suite.report(7, "both predictive", s.fractions.e3 >= 0.70 && bigger && early,
                     fractions(s) + ", " + e3_means(s) + ", coexisting at tick 500: " +
                         std::to_string(alive_500) +
                         " (need E3 >= 0.70, populations 10x criterion 4, coexistence by tick 500)");
    }

    const auto frac_w = suite.batch("wolves fraction", "wolves_fraction_reproduce = true");
    const auto frac_s = suite.batch("sheep fraction", "sheep_fraction_reproduce = true");
    const auto frac_both = suite.batch(
        "both fraction", "wolves_fraction_reproduce = true\nsheep_fraction_reproduce = true");
    {
        const bool none = frac_w.stats.count_e3 == 0 && frac_s.stats.count_e3 == 0 &&
                          frac_both.stats.count_e3 == 0;
        const bool more_e1 = frac_w.stats.fractions.e1 > base.stats.fractions.e1;
        suite.report(8, "fraction reproduction", none && more_e1,
                     "wolves " + fractions(frac_w.stats) + "; sheep " + fractions(frac_s.stats) +
                         "; both " + fractions(frac_both.stats) + "; baseline E1 " +
                         num(base.stats.fractions.e1) + " (need E3 = 0 each, wolves E1 > baseline)");
    }

    const auto flock = suite.batch("flocking", "sheep_flocking = true");
    suite.report(9, "flocking", flock.stats.count_e3 == 0, fractions(flock.stats) + " (need E3 = 0)");
}

void ode_criteria(Suite& suite) {
    using namespace pplab::lv;
    const LVParams p{1, 1, 1, 1};
    const ODEState start{2, 1, 0};
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto period = find_period(p, start, 1e-3, 30.0);
        double drift = 0.0, gap = INFINITY;
        if (period) {
            const auto traj = integrate(p, start, 1e-3, *period);
            const double v0 = lyap::v_value(p, start.x, start.y);
            for (const auto& s : traj.states) {
                drift = std::max(drift, std::abs(lyap::v_value(p, s.x, s.y) - v0) / v0);
            }
            const auto end = integrate_to(p, start, 1e-3, *period);
            gap = std::hypot(end.x - start.x, end.y - start.y);
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = period && drift <= 1e-6 && gap <= 1e-3 && secs < 1.0;
        suite.report(10, "ode conservation", ok,
                     "period " + (period ? num(*period, 6) : std::string("none")) + ", V drift " +
                         sci(drift) + ", closure " + sci(gap) + ", " + num(secs, 3) + " s");
    }
    {
        const double t_end = 4.0;
        const auto ref = integrate_to(p, start, 1e-4, t_end);
        auto err = [&](double dt) {
            const auto s = integrate_to(p, start, dt, t_end);
            return std::hypot(s.x - ref.x, s.y - ref.y);
        };
        const double ratio = err(0.04) / err(0.02);
        suite.report(11, "ode convergence order", ratio >= 12.0 && ratio <= 20.0,
                     "error ratio dt/(dt/2) = " + num(ratio, 2) + " (need 12-20)");
    }
}

void lyapunov_criteria(Suite& suite) {
    using namespace pplab::lyap;
    std::mt19937_64 gen(20240601);
    std::uniform_real_distribution<double> log_coef(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double worst_eq = 0.0, worst_vdot = 0.0, worst_agree = 0.0;
    bool positive = true;
    for (int k = 0; k < 20; ++k) {
        const LVParams p{std::exp(log_coef(gen)), std::exp(log_coef(gen)), std::exp(log_coef(gen)),
                         std::exp(log_coef(gen))};
        const auto eq = lv::equilibrium_point(p);
        worst_eq = std::max(worst_eq, std::abs(v_value(p, eq.x, eq.y)));
        positive = positive && check_conditions(p, default_grid(p)).condition2_positive;
        for (int i = 0; i < 1000; ++i) {
            // Interior of the default scan box, log-uniform per axis.
            const double x = eq.x * std::pow(10.0, 2.0 * unit(gen) - 1.0);
            const double y = eq.y * std::pow(10.0, 2.0 * unit(gen) - 1.0);
            const double a = v_dot(p, x, y), b = v_dot_chain_rule(p, x, y);
            worst_vdot = std::max({worst_vdot, std::abs(a), std::abs(b)});
            worst_agree = std::max(worst_agree, std::abs(a - b) / v_dot_scale(p, x, y));
        }
    }
    const bool ok = worst_eq <= 1e-12 && positive && worst_vdot <= 1e-9 && worst_agree <= 1e-12;
    suite.report(12, "lyapunov properties", ok,
                 "max |V(eq)| " + sci(worst_eq) + ", V > 0 off equilibrium " +
                     (positive ? "yes" : "no") + ", max |Vdot| " + sci(worst_vdot) +
                     ", expanded vs chain rule " + sci(worst_agree) + " relative");
}

void anharmonic_criterion(Suite& suite) {
    bool ok = true;
    double worst = 0.0;
    for (const double b : {1.0, 2.5}) {
        for (const double a : {0.1, 1.0, 10.0}) {
            const auto m = lyap::anharmonic_minima(a, b);
            ok = ok && m.count == 1 && m.locations.size() == 1 && m.locations[0] == 0.0;
        }
        for (const double a : {-0.1, -1.0, -10.0}) {
            const auto m = lyap::anharmonic_minima(a, b);
            ok = ok && m.count == 2 && m.locations.size() == 2;
            if (m.locations.size() == 2) {
                const double r = std::sqrt(-a / b);
                worst = std::max({worst, std::abs(m.locations[0] + r), std::abs(m.locations[1] - r)});
            }
        }
    }
    ok = ok && worst <= 1e-12;
    suite.report(13, "anharmonic minima", ok, "location error " + sci(worst));
}

void determinism_criterion(Suite& suite) {
    BatchSpec spec;
    spec.n_runs = 100;
    spec.base_seed = 7;
    spec.parallelism = 1;
    const auto serial = batch_to_json(spec, run_batch(spec)).dump();
    spec.parallelism = 8;
    const auto parallel = batch_to_json(spec, run_batch(spec)).dump();

    SimConfig c;
    c.seed = 123;
    c.trajectory_interval = 50;
    const bool same_run = run_single(c) == run_single(c);
    suite.report(14, "determinism", serial == parallel && same_run,
                 std::string("batch stats 1 vs 8 threads ") +
                     (serial == parallel ? "identical" : "differ") + ", repeated run " +
                     (same_run ? "identical" : "differs"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    Options opt;
    app.add_option("--runs", opt.runs, "runs per batch")->check(CLI::PositiveNumber);
    app.add_option("--threads", opt.threads, "worker threads (default: PPLAB_THREADS or all cores)");
    app.add_option("--seed", opt.seed, "base seed");
    app.add_flag("--strict", opt.strict, "exit nonzero when a criterion fails");
    CLI11_PARSE(app, argc, argv);
    if (opt.threads < 1) opt.threads = default_threads();
    std::cerr << "acceptance: " << opt.runs << " runs per batch, " << opt.threads << " threads\n";

    Suite suite(opt);
    abm_criteria(suite);
    ode_criteria(suite);
    lyapunov_criteria(suite);
    anharmonic_criterion(suite);
    determinism_criterion(suite);

    std::cout << suite.passed() << " of " << suite.total() << " criteria passed" << std::endl;
    return opt.strict && suite.passed() != suite.total() ? 1 : 0;
}
