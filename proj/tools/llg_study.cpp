// Study-runner CLI: temporal/spatial/coupled convergence studies, norm
// preservation sweeps, and the explicit-scheme stability probe, emitted as
// plot-ready CSV.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "llg/study.hpp"

namespace {

struct CliOptions {
    std::string scheme = "fractional";
    double alpha = 0.01;
    int dim = 1;
    int n = 2001;
    int nt = 100000;
    double final_time = 0.1;
    std::string levels;
    std::string out;
    std::string config_path;
    std::string study;  // only used by the generic "run" subcommand
    bool allow_large = false;
};

const std::map<std::string, llg::SchemeKind> kSchemes = {
    {"explicit", llg::SchemeKind::ExplicitRegularized},
    {"fractional", llg::SchemeKind::FractionalGS},
    {"cn-midpoint", llg::SchemeKind::CNMidpoint},
    {"cn-trapezoidal", llg::SchemeKind::CNTrapezoidal},
};

const std::map<std::string, llg::StudyKind> kStudies = {
    {"temporal", llg::StudyKind::Temporal},
    {"spatial", llg::StudyKind::Spatial},
    {"coupled3d", llg::StudyKind::Coupled3D},
    {"norm", llg::StudyKind::NormPreservation},
    {"stability", llg::StudyKind::StabilityProbe},
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--scheme", opt.scheme, "Time integrator")
        ->transform(CLI::IsMember(kSchemes, CLI::ignore_case))
        ->capture_default_str();
    cmd->add_option("--alpha", opt.alpha, "Gilbert damping coefficient")->capture_default_str();
    cmd->add_option("--dim", opt.dim, "Spatial dimension (1 or 3)")->capture_default_str();
    cmd->add_option("--n", opt.n, "Nodes per axis where the study fixes the grid")
        ->capture_default_str();
    cmd->add_option("--nt", opt.nt, "Step count where the study fixes the time step (k = T/nt)")
        ->capture_default_str();
    cmd->add_option("-T,--T", opt.final_time, "Final time")->capture_default_str();
    cmd->add_option("--levels", opt.levels,
                    "Comma-separated refinement list; entries are decimals, a/b, or T/b "
                    "(k values for temporal-type sweeps, h values for spatial ones)");
    cmd->add_option("--out", opt.out, "Output CSV path (stdout when omitted)");
    cmd->add_flag("--allow-large", opt.allow_large,
                  "Allow 3D coupled rows beyond 48 nodes per axis");
    cmd->add_option("--config", opt.config_path,
                    "Config file with key=value lines, '#' comments; flags given on the "
                    "command line win over config values");
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Applies key=value pairs for every option the user did not pass explicitly:
// command-line flags win over the config file, the config file wins over
// defaults.
void apply_config_file(const CLI::App* cmd, CliOptions& opt, bool is_run_command) {
    std::ifstream file(opt.config_path);
    if (!file) throw std::invalid_argument("config: cannot open " + opt.config_path);
    auto flag_given = [&](const char* name) { return cmd->count(name) > 0; };
    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not a key=value pair");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto bad_value = [&]() {
            return std::invalid_argument("config: bad value for '" + key + "': " + value);
        };
        auto to_d = [&](const std::string& v) {
            try {
                std::size_t pos = 0;
                const double x = std::stod(v, &pos);
                if (pos != v.size()) throw bad_value();
                return x;
            } catch (const std::exception&) {
                throw bad_value();
            }
        };
        auto to_i = [&](const std::string& v) {
            try {
                std::size_t pos = 0;
                const int x = std::stoi(v, &pos);
                if (pos != v.size()) throw bad_value();
                return x;
            } catch (const std::exception&) {
                throw bad_value();
            }
        };
        if (key == "scheme") {
            if (!kSchemes.count(value)) throw bad_value();
            if (!flag_given("--scheme")) opt.scheme = value;
        } else if (key == "alpha") {
            const double v = to_d(value);
            if (!flag_given("--alpha")) opt.alpha = v;
        } else if (key == "dim") {
            const int v = to_i(value);
            if (!flag_given("--dim")) opt.dim = v;
        } else if (key == "n") {
            const int v = to_i(value);
            if (!flag_given("--n")) opt.n = v;
        } else if (key == "nt") {
            const int v = to_i(value);
            if (!flag_given("--nt")) opt.nt = v;
        } else if (key == "T") {
            const double v = to_d(value);
            if (!flag_given("--T")) opt.final_time = v;
        } else if (key == "levels") {
            if (!flag_given("--levels")) opt.levels = value;
        } else if (key == "out") {
            if (!flag_given("--out")) opt.out = value;
        } else if (key == "allow-large") {
            const bool v = value == "true" || value == "1";
            if (!v && value != "false" && value != "0") throw bad_value();
            if (!flag_given("--allow-large")) opt.allow_large = v;
        } else if (key == "study" && is_run_command) {
            if (!kStudies.count(value)) throw bad_value();
            if (!flag_given("--study")) opt.study = value;
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
}

std::string default_levels(llg::StudyKind kind, int dim) {
    switch (kind) {
        case llg::StudyKind::Temporal: return "T/80,T/120,T/160,T/240,T/320";
        case llg::StudyKind::Spatial: return "1/16,1/24,1/32,1/48,1/64";
        case llg::StudyKind::Coupled3D: return "1/10,1/20,1/24";
        case llg::StudyKind::NormPreservation:
            return dim == 3 ? "1/10,1/20,1/24,1/28"
                            : "2e-2,1e-2,5e-3,2.5e-3,1.25e-3,6.25e-4,3.125e-4";
        case llg::StudyKind::StabilityProbe: return "2e-2,1e-2,5e-3,2.5e-3,1.25e-3,6.25e-4";
    }
    return "";
}

llg::StudyConfig to_study_config(llg::StudyKind kind, const CliOptions& opt) {
    llg::StudyConfig cfg;
    cfg.study = kind;
    cfg.scheme = kSchemes.at(opt.scheme);
    cfg.dim = kind == llg::StudyKind::Coupled3D ? 3 : opt.dim;
    cfg.alpha = opt.alpha;
    cfg.final_time = opt.final_time;
    cfg.fixed_n = opt.n;
    cfg.fixed_steps = opt.nt;
    cfg.output_path = opt.out;
    cfg.allow_large = opt.allow_large;
    const std::string levels =
        opt.levels.empty() ? default_levels(kind, cfg.dim) : opt.levels;
    cfg.levels = llg::parse_levels(levels, opt.final_time);
    return cfg;
}

int run(llg::StudyKind kind, const CliOptions& opt) {
    const llg::StudyConfig cfg = to_study_config(kind, opt);
    const llg::ConvergenceReport report = llg::run_study(cfg);
    if (cfg.output_path.empty()) {
        std::cout << llg::csv_string(report);
    } else {
        llg::write_csv(report, cfg.output_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure-preserving integrator studies for magnetization dynamics"};
    app.require_subcommand(1);

    std::map<std::string, CliOptions> opts;
    std::map<std::string, CLI::App*> commands;
    for (const auto& [name, kind] : kStudies) {
        CliOptions& o = opts[name];
        if (kind == llg::StudyKind::StabilityProbe) o.scheme = "explicit";
        if (kind == llg::StudyKind::Coupled3D) o.dim = 3;
        commands[name] = app.add_subcommand(name, "Run the " + name + " study");
        add_common_options(commands[name], o);
    }
    CliOptions& run_opt = opts["run"];
    CLI::App* generic = app.add_subcommand("run", "Run a study selected by --study");
    generic->add_option("--study", run_opt.study, "Study kind")
        ->transform(CLI::IsMember(kStudies, CLI::ignore_case));
    add_common_options(generic, run_opt);
    commands["run"] = generic;

    try {
        app.parse(argc, argv);
        std::string selected;
        for (const auto& [name, cmd] : commands) {
            if (app.got_subcommand(name)) selected = name;
        }
        CliOptions& opt = opts.at(selected);
        if (!opt.config_path.empty()) {
            apply_config_file(commands.at(selected), opt, selected == "run");
        }
        if (selected == "run") {
            if (opt.study.empty()) {
                throw std::invalid_argument("run: --study is required (flag or config key)");
            }
            return run(kStudies.at(opt.study), opt);
        }
        return run(kStudies.at(selected), opt);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const llg::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const llg::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
