#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "remcorr/sweep_engine.hpp"

namespace remcorr::cli {

enum class Command { Profile, Curves, Optimize, PhiSweep, Scaling, Fit, Sweep, Map };

/// Validated run configuration. Every computation is deterministic; there is no seed.
struct RunConfig {
    Command command = Command::Profile;
    int n = 0;
    double phi = 0.5;
    double step = 0.05;
    std::optional<double> t;
    SubDomainId domain = SubDomainId::Full;
    std::string output_path;  // empty: stdout
    int samples = 101;
    std::vector<double> phi_grid;
    std::vector<int> n_grid;
    double cell_size = 0.02;
    double varphi1 = 0.0;
    double varphi2 = 0.0;
    std::string coverage_path;  // map: coverage JSON
    std::string summary_path;   // scaling: gamma JSON (stderr when empty)
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown for --help; carries the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_compute_error = 1;
inline constexpr int exit_usage = 2;

/// `args` excludes the program name. Throws UsageError naming the offending flag.
[[nodiscard]] RunConfig parse_args(std::span<const std::string> args);

/// Parses "a,b,c" or "start:step:stop" (inclusive).
[[nodiscard]] std::vector<double> parse_real_list(const std::string& text, const std::string& flag);
[[nodiscard]] std::vector<int> parse_int_list(const std::string& text, const std::string& flag);

/// Executes a validated configuration. Computational failures propagate as exceptions.
void run(const RunConfig& config, std::ostream& log);

/// Full front end: parse, run, map failures to exit codes (0 ok, 2 usage, 1 computation).
int main_entry(std::span<const std::string> args, std::ostream& log);

}  // namespace remcorr::cli
