#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pplab/lyapunov.hpp"
#include "pplab/montecarlo.hpp"
#include "pplab/ode_lv.hpp"
#include "pplab/sim_core.hpp"

namespace pplab::cli {

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitRuntime = 3,
};

/// Bad command line: unknown flag, missing or malformed argument.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CommandKind { Run, Batch, Compare, Ode, Lyapunov, Anharmonic };

enum class Format { Json, Csv };

struct Command {
    CommandKind kind = CommandKind::Run;
    /// Resolved configuration: file first, then --key overrides, then --seed.
    SimConfig config;
    /// Compare only: one resolved config per --spec, named after the file stem.
    std::vector<std::pair<std::string, SimConfig>> specs;
    int runs = 1000;
    std::uint64_t base_seed = 0;
    int threads = 1;
    Format format = Format::Json;
    /// Primary output; empty means standard output.
    std::filesystem::path out;
    /// Secondary outputs: per-run CSV for batch, grid CSV for lyapunov.
    std::filesystem::path extra_out;

    lv::LVParams params{1.0, 1.0, 1.0, 1.0};
    lv::ODEState start{2.0, 1.0, 0.0};
    double dt = 1e-3;
    double t_end = 20.0;
    lyap::GridSpec grid;  ///< bounds left at zero mean the default grid
    double anharmonic_a = 1.0;
    double anharmonic_b = 1.0;
    /// --help was requested; `help_text` holds the message.
    bool help = false;
    std::string help_text;
};

/// Parses argv (program name excluded). Throws UsageError or ConfigError.
Command parse_args(const std::vector<std::string>& args);

/// Carries out a parsed command. Results go to the files named in the
/// command, or to `out` when no file is given. Returns the exit code;
/// failures are reported on `err` as one line.
int execute(const Command& cmd, std::ostream& out, std::ostream& err);

/// parse_args then execute, mapping exceptions to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Summary of one run with the resolved config, as written by `run`.
nlohmann::ordered_json run_to_json(const SimConfig& config, const RunOutcome& r);

}  // namespace pplab::cli
