#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "pplab/config_io.hpp"
#include "pplab/engine.hpp"

namespace pplab::cli {

namespace {

int default_threads() {
    if (const char* env = std::getenv("PPLAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("PPLAB_THREADS must be a positive integer, got '") + env + "'");
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Config flags shared by run, batch and compare: --config plus one
/// override per config key. `seed` is left out; each command owns --seed.
struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string, std::less<>> values;
    std::vector<std::pair<std::string, CLI::Option*>> options;

    void attach(CLI::App& app, bool with_config_file) {
        if (with_config_file) {
            app.add_option("--config", config_path, "config file (key = value lines)");
        }
        for (const auto key : config_keys()) {
            if (key == "seed") continue;
            const std::string name(key);
            auto* opt = app.add_option("--" + name, values[name], "override " + name)
                            ->group("Config overrides");
            options.emplace_back(name, opt);
        }
    }

    /// File first, overrides in canonical key order, then validation.
    SimConfig resolve(const std::string& file) const {
        SimConfig c = file.empty() ? SimConfig{} : load_config(file);
        apply(c);
        return c;
    }

    void apply(SimConfig& c) const {
        for (const auto& [name, opt] : options) {
            if (opt->count() > 0) set_config_value(c, name, values.at(name));
        }
    }
};

void check_format(const std::string& text, Format& format) {
    if (text == "json") {
        format = Format::Json;
    } else if (text == "csv") {
        format = Format::Csv;
    } else {
        throw UsageError("--format must be json or csv, got '" + text + "'");
    }
}

std::string stem_name(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

/// Opens every named output before any work starts, so a bad path fails
/// fast. Empty paths map to `fallback`.
class Outputs {
public:
    explicit Outputs(std::ostream& fallback) : fallback_(fallback) {}

    std::ostream* open(const std::filesystem::path& path) {
        if (path.empty()) return &fallback_;
        auto file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file) throw std::runtime_error("cannot write output file '" + path.string() + "'");
        files_.push_back({path, std::move(file)});
        return files_.back().second.get();
    }

    /// Open only when a path is given.
    std::ostream* open_optional(const std::filesystem::path& path) {
        return path.empty() ? nullptr : open(path);
    }

    void close() {
        for (auto& [path, f] : files_) {
            f->flush();
            if (!*f) throw std::runtime_error("failed writing '" + path.string() + "'");
        }
    }

private:
    std::ostream& fallback_;
    std::vector<std::pair<std::filesystem::path, std::unique_ptr<std::ofstream>>> files_;
};

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

nlohmann::ordered_json grid_to_json(const lyap::GridSpec& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
            {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny},
            {"log_spaced", g.log_spaced}};
}

}  // namespace

nlohmann::ordered_json run_to_json(const SimConfig& config, const RunOutcome& r) {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(config);
    j["seed"] = r.seed;
    j["outcome"] = std::string(to_string(r.outcome));
    j["absorption_tick"] = r.absorption_tick;
    j["final_tick"] = r.final_tick;
    j["final_sheep"] = r.final_sheep;
    j["final_wolves"] = r.final_wolves;
    j["peak_sheep"] = r.peak_sheep;
    j["peak_wolves"] = r.peak_wolves;
    j["capped"] = r.capped;
    return j;
}

Command parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Predator-prey strategy laboratory", "pplab"};
    app.require_subcommand(1);
    app.fallthrough(false);

    Command cmd;
    std::string format_text = "json";

    // run
    auto* run = app.add_subcommand("run", "one seeded simulation");
    ConfigFlags run_flags;
    std::uint64_t run_seed = 0;
    run_flags.attach(*run, true);
    auto* run_seed_opt = run->add_option("--seed", run_seed, "run seed");
    std::string run_out, run_summary;
    run->add_option("--out", run_out, "trajectory CSV");
    run->add_option("--summary", run_summary, "summary JSON (default: stdout)");

    // batch
    auto* batch = app.add_subcommand("batch", "many seeded runs of one config");
    ConfigFlags batch_flags;
    batch_flags.attach(*batch, true);
    int runs = 1000;
    std::optional<int> threads;
    std::uint64_t base_seed = 0;
    std::string batch_out, batch_runs_out;
    batch->add_option("--runs", runs, "number of runs")->capture_default_str();
    batch->add_option("--seed", base_seed, "base seed");
    batch->add_option("--threads", threads, "worker threads (default: PPLAB_THREADS or all cores)");
    batch->add_option("--out", batch_out, "statistics (default: stdout)");
    batch->add_option("--runs-out", batch_runs_out, "per-run CSV");
    batch->add_option("--format", format_text, "json or csv")->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "batches of several configs side by side");
    ConfigFlags compare_flags;
    compare_flags.attach(*compare, false);
    std::vector<std::string> spec_paths;
    std::string compare_out;
    compare->add_option("--spec", spec_paths, "config file, repeatable")
        ->required();
    compare->add_option("--runs", runs, "runs per config")->capture_default_str();
    compare->add_option("--seed", base_seed, "base seed");
    compare->add_option("--threads", threads, "worker threads");
    compare->add_option("--out", compare_out, "table (default: stdout)");
    compare->add_option("--format", format_text, "csv or json");

    // ode
    auto* ode = app.add_subcommand("ode", "integrate the Lotka-Volterra equations");
    std::string ode_out;
    auto add_params = [&](CLI::App* sub) {
        sub->add_option("--a", cmd.params.a, "prey growth")->capture_default_str();
        sub->add_option("--b", cmd.params.b, "predation")->capture_default_str();
        sub->add_option("--c", cmd.params.c, "predator decay")->capture_default_str();
        sub->add_option("--d", cmd.params.d, "conversion")->capture_default_str();
    };
    add_params(ode);
    ode->add_option("--x0", cmd.start.x, "initial prey")->capture_default_str();
    ode->add_option("--y0", cmd.start.y, "initial predators")->capture_default_str();
    ode->add_option("--t0", cmd.start.t, "start time")->capture_default_str();
    ode->add_option("--dt", cmd.dt, "step size")->capture_default_str();
    ode->add_option("--t", cmd.t_end, "end time")->capture_default_str();
    ode->add_option("--out", ode_out, "trajectory CSV (default: stdout)");

    // lyapunov
    auto* lyapunov = app.add_subcommand("lyapunov", "check the Lyapunov conditions on a grid");
    add_params(lyapunov);
    std::string lyap_out, lyap_grid_out;
    std::optional<int> nx, ny;
    bool linear = false;
    lyapunov->add_option("--nx", nx, "grid points along x");
    lyapunov->add_option("--ny", ny, "grid points along y");
    lyapunov->add_flag("--linear", linear, "linear instead of log spacing");
    lyapunov->add_option("--out", lyap_out, "report JSON (default: stdout)");
    lyapunov->add_option("--grid-out", lyap_grid_out, "x,y,V,Vdot CSV");

    // anharmonic
    auto* anharmonic = app.add_subcommand("anharmonic", "minima of a x^2/2 + b x^4/4");
    std::string anh_out;
    anharmonic->add_option("--a", cmd.anharmonic_a, "quadratic coefficient")->capture_default_str();
    anharmonic->add_option("--b", cmd.anharmonic_b, "quartic coefficient")->capture_default_str();
    anharmonic->add_option("--format", format_text, "text or json");
    anharmonic->add_option("--out", anh_out, "output file (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        cmd.help = true;
        const auto parsed = app.get_subcommands();
        cmd.help_text = parsed.empty() ? app.help() : parsed.front()->help();
        return cmd;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (threads && *threads < 1) throw UsageError("--threads must be at least 1");
    cmd.threads = threads ? *threads : default_threads();
    cmd.runs = runs;
    cmd.base_seed = base_seed;

    if (run->parsed()) {
        cmd.kind = CommandKind::Run;
        cmd.config = run_flags.resolve(run_flags.config_path);
        if (run_seed_opt->count() > 0) cmd.config.seed = run_seed;
        if (!run_out.empty() && cmd.config.trajectory_interval == 0) cmd.config.trajectory_interval = 1;
        cmd.config.validate();
        cmd.out = run_summary;
        cmd.extra_out = run_out;
    } else if (batch->parsed()) {
        cmd.kind = CommandKind::Batch;
        if (runs < 1) throw UsageError("--runs must be at least 1, got " + std::to_string(runs));
        check_format(format_text, cmd.format);
        cmd.config = batch_flags.resolve(batch_flags.config_path);
        cmd.config.validate();
        cmd.out = batch_out;
        cmd.extra_out = batch_runs_out;
    } else if (compare->parsed()) {
        cmd.kind = CommandKind::Compare;
        if (runs < 1) throw UsageError("--runs must be at least 1, got " + std::to_string(runs));
        if (spec_paths.size() < 2) throw UsageError("compare needs at least two --spec files");
        cmd.format = Format::Csv;
        if (compare->get_option("--format")->count() > 0) check_format(format_text, cmd.format);
        for (const auto& path : spec_paths) {
            auto c = compare_flags.resolve(path);
            c.validate();
            cmd.specs.emplace_back(stem_name(path), c);
        }
        cmd.out = compare_out;
    } else if (ode->parsed()) {
        cmd.kind = CommandKind::Ode;
        cmd.params.validate();
        if (!(cmd.dt > 0.0)) throw UsageError("--dt must be positive");
        if (!(cmd.t_end > cmd.start.t)) throw UsageError("--t must exceed the start time");
        if (!(cmd.start.x > 0.0 && cmd.start.y > 0.0)) {
            throw UsageError("--x0 and --y0 must be positive");
        }
        cmd.out = ode_out;
    } else if (lyapunov->parsed()) {
        cmd.kind = CommandKind::Lyapunov;
        cmd.params.validate();
        cmd.grid = lyap::default_grid(cmd.params);
        if (nx) cmd.grid.nx = *nx;
        if (ny) cmd.grid.ny = *ny;
        cmd.grid.log_spaced = !linear;
        cmd.grid.validate();
        cmd.out = lyap_out;
        cmd.extra_out = lyap_grid_out;
    } else {
        cmd.kind = CommandKind::Anharmonic;
        if (format_text == "text" || anharmonic->get_option("--format")->count() == 0) {
            cmd.format = Format::Csv;  // plain text
        } else if (format_text == "json") {
            cmd.format = Format::Json;
        } else {
            throw UsageError("--format must be text or json, got '" + format_text + "'");
        }
        cmd.out = anh_out;
    }
    return cmd;
}

int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
    if (cmd.help) {
        out << cmd.help_text;
        return kExitOk;
    }
    try {
        Outputs outputs(out);
        switch (cmd.kind) {
            case CommandKind::Run: {
                auto* summary = outputs.open(cmd.out);
                auto* traj = outputs.open_optional(cmd.extra_out);
                const auto r = run_single(cmd.config);
                if (traj) write_trajectory_csv(*traj, cmd.config, r.trajectory);
                *summary << run_to_json(cmd.config, r).dump(2) << '\n';
                break;
            }
            case CommandKind::Batch: {
                BatchSpec spec{cmd.config, cmd.runs, cmd.base_seed, cmd.threads};
                spec.validate();
                auto* stats_out = outputs.open(cmd.out);
                auto* runs_out = outputs.open_optional(cmd.extra_out);
                const auto runs = run_batch_outcomes(spec);
                const auto stats = aggregate(runs);
                if (cmd.format == Format::Json) {
                    *stats_out << batch_to_json(spec, stats).dump(2) << '\n';
                } else {
                    write_comparison_csv(*stats_out, {{"batch", spec}}, {{"batch", stats}});
                }
                if (runs_out) write_runs_csv(*runs_out, spec, runs);
                break;
            }
            case CommandKind::Compare: {
                std::vector<NamedSpec> specs;
                for (const auto& [name, config] : cmd.specs) {
                    specs.push_back({name, BatchSpec{config, cmd.runs, cmd.base_seed, cmd.threads}});
                }
                auto* table = outputs.open(cmd.out);
                const auto rows = compare_strategies(specs);
                if (cmd.format == Format::Csv) {
                    write_comparison_csv(*table, specs, rows);
                } else {
                    auto j = nlohmann::ordered_json::array();
                    for (std::size_t i = 0; i < rows.size(); ++i) {
                        auto entry = batch_to_json(specs[i].spec, rows[i].stats);
                        nlohmann::ordered_json named;
                        named["name"] = rows[i].name;
                        for (auto& [k, v] : entry.items()) named[k] = v;
                        j.push_back(std::move(named));
                    }
                    *table << j.dump(2) << '\n';
                }
                break;
            }
            case CommandKind::Ode: {
                auto* csv = outputs.open(cmd.out);
                const auto traj = lv::integrate(cmd.params, cmd.start, cmd.dt, cmd.t_end);
                lv::write_trajectory_csv(*csv, traj);
                break;
            }
            case CommandKind::Lyapunov: {
                auto* report_out = outputs.open(cmd.out);
                auto* grid_out = outputs.open_optional(cmd.extra_out);
                auto j = lyap::report_to_json(lyap::check_conditions(cmd.params, cmd.grid));
                j["grid"] = grid_to_json(cmd.grid);
                *report_out << j.dump(2) << '\n';
                if (grid_out) lyap::write_grid_csv(*grid_out, cmd.params, cmd.grid);
                break;
            }
            case CommandKind::Anharmonic: {
                auto* text = outputs.open(cmd.out);
                const auto m = lyap::anharmonic_minima(cmd.anharmonic_a, cmd.anharmonic_b);
                if (cmd.format == Format::Json) {
                    nlohmann::ordered_json j;
                    j["a"] = cmd.anharmonic_a;
                    j["b"] = cmd.anharmonic_b;
                    j["count"] = m.count;
                    j["locations"] = m.locations;
                    j["flat"] = m.flat;
                    *text << j.dump(2) << '\n';
                } else {
                    *text << "a = " << format_double(cmd.anharmonic_a)
                          << ", b = " << format_double(cmd.anharmonic_b) << '\n'
                          << "minima: " << m.count << '\n';
                    for (const double x : m.locations) *text << "x = " << format_double(x) << '\n';
                    if (m.flat) *text << "the minimum is quartic (flat)\n";
                }
                break;
            }
        }
        outputs.close();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Command cmd;
    try {
        cmd = parse_args(args);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << " (try --help)\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return kExitConfig;
    }
    return execute(cmd, out, err);
}

}  // namespace pplab::cli
