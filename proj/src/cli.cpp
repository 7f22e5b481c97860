#include "remcorr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "remcorr/errors.hpp"
#include "remcorr/io.hpp"

namespace remcorr::cli {

namespace {

struct RawOptions {
    int n = 0;
    double phi = 0.5;
    double step = 0.05;
    double t = 0.0;
    std::string domain = "FULL";
    std::string out;
    int samples = 101;
    std::string phi_grid = "0:0.0625:0.5";
    std::string n_grid = "50,100,150,200,250,300";
    double cell_size = 0.02;
    double varphi1 = 0.0;
    double varphi2 = 0.0;
    std::string coverage;
    std::string summary;
};

std::string format_value(double value) {
    std::ostringstream os;
    os << value;
    return os.str();
}

[[noreturn]] void usage(const std::string& message) {
    throw UsageError(message);
}

void check_step_divides(double step, double edge, const std::string& what) {
    const double ratio = edge / step;
    if (std::abs(std::round(ratio) * step - edge) > 1e-9) {
        usage("--step: value " + format_value(step) + " does not divide the " + what + " edge " +
              format_value(edge));
    }
}

const std::vector<double>& default_r_nm1_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> values;
        for (int k = 0; k <= 10; ++k) {
            values.push_back(k / 10.0);
        }
        return values;
    }();
    return grid;
}

SpectralDecomposition decompose(int n, double phi) {
    return spectral_decomposition(coupling_profile(ChainSpec(n, phi)));
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text, const std::string& flag) {
    const auto number = [&](const std::string& token) {
        try {
            return io::parse_number(token);
        } catch (const std::invalid_argument&) {
            usage(flag + ": '" + token + "' is not a number");
        }
    };
    std::vector<std::string> tokens;
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        std::stringstream stream(text);
        std::string token;
        while (std::getline(stream, token, ':')) {
            tokens.push_back(token);
        }
        if (tokens.size() != 3) {
            usage(flag + ": range must be start:step:stop");
        }
        const double start = number(tokens[0]);
        const double step = number(tokens[1]);
        const double stop = number(tokens[2]);
        if (!(step > 0.0) || stop < start) {
            usage(flag + ": range needs step > 0 and stop >= start");
        }
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long k = 0; k <= count; ++k) {
            values.push_back(start + static_cast<double>(k) * step);
        }
        return values;
    }
    std::stringstream stream(text);
    std::string token;
    while (std::getline(stream, token, ',')) {
        values.push_back(number(token));
    }
    if (values.empty()) {
        usage(flag + ": empty list");
    }
    return values;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> values;
    for (const double value : parse_real_list(text, flag)) {
        if (value != std::round(value)) {
            usage(flag + ": '" + format_value(value) + "' is not an integer");
        }
        values.push_back(static_cast<int>(value));
    }
    return values;
}

RunConfig parse_args(std::span<const std::string> args) {
    CLI::App app{"Remote creation of receiver correlations in engineered XY spin chains", "remcorr"};
    app.require_subcommand(1, 1);
    RawOptions raw;

    struct Subcommand {
        Command command;
        CLI::App* app;
    };
    std::vector<Subcommand> subcommands;
    const auto add = [&](Command command, const char* name, const char* description) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--out", raw.out, "Output path (default stdout)");
        subcommands.push_back({command, sub});
        return sub;
    };

    auto* profile = add(Command::Profile, "profile", "Coupling constants D_i");
    profile->add_option("--n", raw.n, "Chain length");
    profile->add_option("--phi", raw.phi, "Inhomogeneity parameter in [0, 0.5]");

    auto* curves = add(Command::Curves, "curves", "Q_ext and Q_R against R^2 for R_{N-1}^2 = 0, 0.1, ..., 1");
    curves->add_option("--samples", raw.samples, "Points per curve");

    auto* optimize = add(Command::Optimize, "optimize", "First maximum of R^2(t) for the sender |1>");
    optimize->add_option("--n", raw.n, "Chain length");
    optimize->add_option("--phi", raw.phi, "Inhomogeneity parameter");

    auto* phi_sweep_cmd = add(Command::PhiSweep, "phi-sweep", "t0 and R^2_max across a phi grid");
    phi_sweep_cmd->add_option("--n", raw.n, "Chain length");
    phi_sweep_cmd->add_option("--phi-grid", raw.phi_grid, "List a,b,c or range start:step:stop");

    auto* scaling = add(Command::Scaling, "scaling", "Exponent gamma in t0 ~ N^gamma");
    scaling->add_option("--phi", raw.phi, "Inhomogeneity parameter");
    scaling->add_option("--n-grid", raw.n_grid, "Chain lengths, list or range");
    scaling->add_option("--summary", raw.summary, "Write the regression summary JSON here");

    auto* fit = add(Command::Fit, "fit", "Fit c - exp(-a phi pi - b) to R^2_max(phi)");
    fit->add_option("--n", raw.n, "Chain length");
    fit->add_option("--phi-grid", raw.phi_grid, "List a,b,c or range start:step:stop");

    auto* sweep_cmd = add(Command::Sweep, "sweep", "Map one control sub-domain to (Q_ext, Q_R)");
    sweep_cmd->add_option("--n", raw.n, "Chain length");
    sweep_cmd->add_option("--phi", raw.phi, "Inhomogeneity parameter");
    sweep_cmd->add_option("--t", raw.t, "Time (default: optimised t0)");
    sweep_cmd->add_option("--domain", raw.domain, "D1, D2, D3, D4 or FULL");
    sweep_cmd->add_option("--step", raw.step, "Grid step in alpha");
    sweep_cmd->add_option("--varphi1", raw.varphi1, "Control phase of a2");
    sweep_cmd->add_option("--varphi2", raw.varphi2, "Control phase of a3");

    auto* map = add(Command::Map, "map", "Optimise t0, sweep D1..D4 and report coverage");
    map->add_option("--n", raw.n, "Chain length");
    map->add_option("--phi", raw.phi, "Inhomogeneity parameter");
    map->add_option("--step", raw.step, "Grid step in alpha");
    map->add_option("--cell-size", raw.cell_size, "Coverage cell size");
    map->add_option("--varphi1", raw.varphi1, "Control phase of a2");
    map->add_option("--varphi2", raw.varphi2, "Control phase of a3");
    map->add_option("--coverage", raw.coverage, "Write the coverage JSON here");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        usage(e.what());
    }

    RunConfig config;
    CLI::App* chosen = nullptr;
    for (const auto& sub : subcommands) {
        if (sub.app->parsed()) {
            config.command = sub.command;
            chosen = sub.app;
        }
    }
    if (chosen == nullptr) {
        usage("a command is required");
    }
    const auto given = [&](const char* flag) {
        const CLI::Option* opt = chosen->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    const auto accepts = [&](const char* flag) { return chosen->get_option_no_throw(flag) != nullptr; };

    config.output_path = raw.out;
    config.phi = raw.phi;
    config.step = raw.step;
    config.samples = raw.samples;
    config.cell_size = raw.cell_size;
    config.varphi1 = raw.varphi1;
    config.varphi2 = raw.varphi2;
    config.coverage_path = raw.coverage;
    config.summary_path = raw.summary;

    // Range checks first, then missing values.
    if (accepts("--phi") && !(raw.phi >= 0.0 && raw.phi <= 0.5)) {
        usage("--phi: value " + format_value(raw.phi) + " out of range [0, 0.5]");
    }
    if (accepts("--samples") && raw.samples < 2) {
        usage("--samples: value " + std::to_string(raw.samples) + " must be >= 2");
    }
    if (accepts("--cell-size") && !(raw.cell_size > 0.0 && raw.cell_size < 1.0)) {
        usage("--cell-size: value " + format_value(raw.cell_size) + " out of range (0, 1)");
    }
    for (const auto& [flag, value] : {std::pair{"--varphi1", raw.varphi1}, std::pair{"--varphi2", raw.varphi2}}) {
        if (accepts(flag) && !(value >= 0.0 && value <= 1.0)) {
            usage(std::string(flag) + ": value " + format_value(value) + " out of range [0, 1]");
        }
    }
    if (accepts("--domain")) {
        const auto domain = parse_subdomain(raw.domain);
        if (!domain) {
            usage("--domain: '" + raw.domain + "' is not one of D1, D2, D3, D4, FULL");
        }
        config.domain = *domain;
    }
    if (accepts("--step")) {
        if (!(raw.step > 0.0 && raw.step <= 0.5)) {
            usage("--step: value " + format_value(raw.step) + " out of range (0, 0.5]");
        }
        const bool quadrant = config.command == Command::Map || config.domain != SubDomainId::Full;
        check_step_divides(raw.step, quadrant ? 0.5 : 1.0, quadrant ? "sub-domain" : "domain");
    }
    if (given("--t")) {
        if (!(raw.t >= 0.0) || !std::isfinite(raw.t)) {
            usage("--t: value " + format_value(raw.t) + " must be a finite time >= 0");
        }
        config.t = raw.t;
    }
    if (accepts("--phi-grid")) {
        config.phi_grid = parse_real_list(raw.phi_grid, "--phi-grid");
        for (const double phi : config.phi_grid) {
            if (!(phi >= 0.0 && phi <= 0.5)) {
                usage("--phi-grid: value " + format_value(phi) + " out of range [0, 0.5]");
            }
        }
        if (config.command == Command::Fit && config.phi_grid.size() < 4) {
            usage("--phi-grid: fit needs at least 4 values");
        }
    }
    if (accepts("--n-grid")) {
        config.n_grid = parse_int_list(raw.n_grid, "--n-grid");
        if (config.n_grid.size() < 4) {
            usage("--n-grid: need at least 4 chain lengths");
        }
        for (const int n : config.n_grid) {
            if (n < ChainSpec::min_length) {
                usage("--n-grid: chain length " + std::to_string(n) + " must be >= 5");
            }
        }
    }
    if (accepts("--n")) {
        if (given("--n") && raw.n < ChainSpec::min_length) {
            usage("--n: value " + std::to_string(raw.n) + " must be >= 5");
        }
        if (!given("--n")) {
            usage("--n: required value missing");
        }
        config.n = raw.n;
    }
    return config;
}

void run(const RunConfig& config, std::ostream& log) {
    const SenderState first_site(0.0, 0.0);
    switch (config.command) {
        case Command::Profile: {
            io::emit_csv(io::profile_table(coupling_profile(ChainSpec(config.n, config.phi))), config.output_path);
            break;
        }
        case Command::Curves: {
            io::emit_csv(io::curves_table(discord_curves(default_r_nm1_grid(), config.samples)), config.output_path);
            break;
        }
        case Command::Optimize: {
            const TimeOptimum optimum = find_first_maximum(decompose(config.n, config.phi), first_site);
            log << "optimize: n=" << config.n << " phi=" << config.phi << " t0=" << io::format_number(optimum.t0)
                << " r2max=" << io::format_number(optimum.r2max) << '\n';
            io::emit_csv(io::optimum_table({optimum}), config.output_path);
            break;
        }
        case Command::PhiSweep: {
            io::emit_csv(io::optimum_table(phi_sweep(config.n, config.phi_grid, first_site)), config.output_path);
            break;
        }
        case Command::Scaling: {
            const ScalingResult result = scaling_exponent(config.phi, config.n_grid, first_site);
            io::emit_csv(io::scaling_table(result), config.output_path);
            if (config.summary_path.empty()) {
                io::write_json(io::scaling_json(result), log);
            } else {
                io::emit_json(io::scaling_json(result), config.summary_path);
            }
            break;
        }
        case Command::Fit: {
            const auto optima = phi_sweep(config.n, config.phi_grid, first_site);
            std::vector<double> r2max;
            for (const auto& optimum : optima) {
                r2max.push_back(optimum.r2max);
            }
            const FitResult fit = fit_exponential(config.phi_grid, r2max);
            if (!fit.converged) {
                log << "fit: warning: fit did not converge after " << fit.iterations << " iterations\n";
            }
            io::emit_json(io::fit_json(config.n, optima, fit), config.output_path);
            break;
        }
        case Command::Sweep: {
            const SpectralDecomposition decomp = decompose(config.n, config.phi);
            const double t = config.t ? *config.t : find_first_maximum(decomp, first_site).t0;
            const SweepOptions options{config.step, config.varphi1, config.varphi2};
            io::emit_csv(io::sweep_table(sweep(decomp, t, SubDomain::of(config.domain), options)), config.output_path);
            break;
        }
        case Command::Map: {
            const SweepOptions options{config.step, config.varphi1, config.varphi2};
            const MapExperiment experiment = run_map_experiment(config.n, config.phi, options, config.cell_size);
            log << "map: n=" << config.n << " phi=" << config.phi << " t0=" << io::format_number(experiment.optimum.t0)
                << " area=" << io::format_number(experiment.coverage.area_estimate) << '\n';
            io::emit_csv(io::map_table(experiment.sweeps), config.output_path);
            if (!config.coverage_path.empty()) {
                io::emit_json(io::coverage_json(experiment), config.coverage_path);
            }
            break;
        }
    }
}

int main_entry(std::span<const std::string> args, std::ostream& log) {
    RunConfig config;
    try {
        config = parse_args(args);
    } catch (const HelpRequested& help) {
        std::cout << help.what();
        return exit_ok;
    } catch (const UsageError& e) {
        log << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    try {
        run(config, log);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return exit_compute_error;
    }
    return exit_ok;
}

}  // namespace remcorr::cli
