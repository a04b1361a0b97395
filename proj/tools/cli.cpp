#include "cli.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nakasec/bounds.hpp"
#include "nakasec/errors.hpp"
#include "nakasec/params.hpp"
#include "nakasec/path_sim.hpp"
#include "nakasec/reduced_sim.hpp"

namespace nakasec::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Keys a flat config file may carry, per subcommand. A key belonging only
// to another subcommand is skipped, so one file can serve several commands.
const std::map<std::string, std::set<std::string>>& config_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"bound", {"lambda", "block-interval", "rho", "delta", "preset", "k", "format"}},
        {"sweep",
         {"lambda", "block-interval", "rho", "delta", "preset", "k-min", "k-max", "format"}},
        {"depth",
         {"lambda", "block-interval", "rho", "delta", "preset", "target", "bound", "k-max",
          "format"}},
        {"simulate",
         {"lambda", "block-interval", "rho", "delta", "preset", "k", "mode", "trials", "seed",
          "burn-in", "epsilon-halt", "threads", "format"}},
    };
    return keys;
}

bool key_known_anywhere(const std::string& key) {
    for (const auto& [cmd, keys] : config_keys()) {
        if (keys.count(key) > 0) return true;
    }
    return false;
}

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

// key=value lines; '#' starts a comment; blank lines are skipped
std::vector<std::pair<std::string, std::string>> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> items;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw DomainError("malformed config line " + std::to_string(line_no) + " in " + path +
                              " (expected key=value): " + stripped);
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw DomainError("malformed config line " + std::to_string(line_no) + " in " + path +
                              " (empty key or value)");
        }
        items.emplace_back(key, value);
    }
    return items;
}

// Expands --config <file> into ordinary flags. File keys already present on
// the command line are dropped: flags override the file.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string subcommand;
    for (const auto& arg : args) {
        if (!arg.empty() && arg[0] != '-') {
            subcommand = arg;
            break;
        }
    }
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    const auto known = config_keys().find(subcommand);
    if (path.empty() || known == config_keys().end()) return args;

    for (const auto& [key, value] : load_config(path)) {
        if (!key_known_anywhere(key)) throw DomainError("unknown config key: " + key);
        if (known->second.count(key) == 0) continue;
        const std::string flag = "--" + key;
        bool already_set = false;
        for (const auto& arg : args) {
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
                already_set = true;
                break;
            }
        }
        if (already_set) continue;
        args.push_back(flag);
        args.push_back(value);
    }
    return args;
}

std::string fmt_human(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.5e", v); // 6 significant digits
    return buf;
}

struct ParamFlags {
    double lambda = 0.0;
    double block_interval = 0.0;
    double rho = 0.0;
    double delta = 0.0;
    std::string preset;

    CLI::Option* lambda_opt = nullptr;
    CLI::Option* block_interval_opt = nullptr;
    CLI::Option* delta_opt = nullptr;
};

void add_param_flags(CLI::App& cmd, ParamFlags& flags) {
    flags.lambda_opt =
        cmd.add_option("--lambda", flags.lambda, "total mining rate in blocks per second");
    flags.block_interval_opt =
        cmd.add_option("--block-interval", flags.block_interval,
                       "mean seconds per block (reciprocal of --lambda)")
            ->excludes(flags.lambda_opt);
    flags.lambda_opt->excludes(flags.block_interval_opt);
    cmd.add_option("--rho", flags.rho, "fraction of honest mining power, in (0, 1]")->required();
    flags.delta_opt =
        cmd.add_option("--delta", flags.delta, "block propagation delay bound in seconds");
    cmd.add_option("--preset", flags.preset,
                   "parameter preset: bitcoin (lambda=1/600, delta=10) or ethereum "
                   "(lambda=1/13, delta=2); explicit flags override")
        ->check(CLI::IsMember({"bitcoin", "ethereum"}));
}

ProtocolParams resolve_params(const ParamFlags& flags) {
    double lambda = 0.0;
    double delta = 0.0;
    bool have_lambda = false;
    bool have_delta = false;
    if (flags.preset == "bitcoin") {
        lambda = 1.0 / 600.0;
        delta = 10.0;
        have_lambda = have_delta = true;
    } else if (flags.preset == "ethereum") {
        lambda = 1.0 / 13.0;
        delta = 2.0;
        have_lambda = have_delta = true;
    }
    if (flags.lambda_opt->count() > 0) {
        lambda = flags.lambda;
        have_lambda = true;
    }
    if (flags.block_interval_opt->count() > 0) {
        if (!(flags.block_interval > 0.0)) {
            throw DomainError("--block-interval must be positive");
        }
        lambda = 1.0 / flags.block_interval;
        have_lambda = true;
    }
    if (flags.delta_opt->count() > 0) {
        delta = flags.delta;
        have_delta = true;
    }
    if (!have_lambda) {
        throw DomainError("a mining rate is required: --lambda, --block-interval, or --preset");
    }
    if (!have_delta) {
        throw DomainError("a delay bound is required: --delta or --preset");
    }
    return ProtocolParams::validate(lambda, flags.rho, delta);
}

ojson base_record(const std::string& command) {
    ojson rec;
    rec["schema_version"] = "1";
    rec["command"] = command;
    return rec;
}

ojson params_json(const ProtocolParams& params) {
    ojson j;
    j["lambda"] = params.lambda();
    j["rho"] = params.rho();
    j["delta"] = params.delta();
    return j;
}

ojson derived_json(const ProtocolParams& params) {
    ojson j;
    j["g"] = params.g();
    j["p"] = params.p();
    j["q"] = params.q();
    j["bounds_valid"] = params.bounds_valid();
    return j;
}

void print_json(const ojson& rec) { std::fputs((rec.dump(2) + "\n").c_str(), stdout); }

std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

const std::vector<std::string> kBoundColumns = {
    "k",
    "thm1_lower", "thm2_lower", "thm2_upper", "thm1_upper",
    "thm1_lower_clamped", "thm2_lower_clamped", "thm2_upper_clamped", "thm1_upper_clamped",
};

std::vector<std::string> bound_row(const BoundsReport& rep) {
    return {
        std::to_string(rep.k),
        fmt_full(rep.thm1_lower_raw),
        fmt_full(rep.thm2_lower_raw),
        fmt_full(rep.thm2_upper_raw),
        fmt_full(rep.thm1_upper_raw),
        fmt_full(rep.thm1_lower_clamped()),
        fmt_full(rep.thm2_lower_clamped()),
        fmt_full(rep.thm2_upper_clamped()),
        fmt_full(rep.thm1_upper_clamped()),
    };
}

ojson bound_results_json(const BoundsReport& rep) {
    ojson j;
    j["thm1_lower"] = rep.thm1_lower_raw;
    j["thm2_lower"] = rep.thm2_lower_raw;
    j["thm2_upper"] = rep.thm2_upper_raw;
    j["thm1_upper"] = rep.thm1_upper_raw;
    j["thm1_lower_clamped"] = rep.thm1_lower_clamped();
    j["thm2_lower_clamped"] = rep.thm2_lower_clamped();
    j["thm2_upper_clamped"] = rep.thm2_upper_clamped();
    j["thm1_upper_clamped"] = rep.thm1_upper_clamped();
    return j;
}

std::vector<std::string> report_warnings(const BoundsReport& rep) {
    std::vector<std::string> warnings;
    if (rep.thm1_upper_raw > 1.0) {
        warnings.push_back("thm1_upper raw value " + fmt_human(rep.thm1_upper_raw) +
                           " exceeds 1 at k=" + std::to_string(rep.k) +
                           "; the clamped view caps it");
    }
    return warnings;
}

void print_warnings_human(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::fprintf(stdout, "warning: %s\n", w.c_str());
}

int run_bound(const ParamFlags& flags, int k, const std::string& format) {
    const ProtocolParams params = resolve_params(flags);
    const BoundsReport rep = bounds_report(ConfirmationDepth(k), params);
    const std::vector<std::string> warnings = report_warnings(rep);

    if (format == "json") {
        ojson rec = base_record("bound");
        rec["inputs"] = params_json(params);
        rec["inputs"]["k"] = k;
        rec["derived"] = derived_json(params);
        rec["results"] = bound_results_json(rep);
        rec["warnings"] = warnings;
        print_json(rec);
    } else if (format == "csv") {
        std::fputs(csv_join(kBoundColumns).c_str(), stdout);
        std::fputs(csv_join(bound_row(rep)).c_str(), stdout);
    } else {
        std::fprintf(stdout, "p = %s (bounds_valid: %s)\n", fmt_human(params.p()).c_str(),
                     params.bounds_valid() ? "yes" : "no");
        std::fprintf(stdout, "%-12s %-14s %s\n", "bound", "raw", "clamped");
        std::fprintf(stdout, "%-12s %-14s %s\n", "thm1_lower", fmt_human(rep.thm1_lower_raw).c_str(),
                     fmt_human(rep.thm1_lower_clamped()).c_str());
        std::fprintf(stdout, "%-12s %-14s %s\n", "thm2_lower", fmt_human(rep.thm2_lower_raw).c_str(),
                     fmt_human(rep.thm2_lower_clamped()).c_str());
        std::fprintf(stdout, "%-12s %-14s %s\n", "thm2_upper", fmt_human(rep.thm2_upper_raw).c_str(),
                     fmt_human(rep.thm2_upper_clamped()).c_str());
        std::fprintf(stdout, "%-12s %-14s %s\n", "thm1_upper", fmt_human(rep.thm1_upper_raw).c_str(),
                     fmt_human(rep.thm1_upper_clamped()).c_str());
        print_warnings_human(warnings);
    }
    return 0;
}

int run_sweep(const ParamFlags& flags, int k_min, int k_max, const std::string& format) {
    const ProtocolParams params = resolve_params(flags);
    const SweepTable table = sweep(params, k_min, k_max);

    std::vector<std::string> warnings;
    int clamped_up_to = 0;
    for (const auto& rep : table.rows) {
        if (rep.thm1_upper_raw > 1.0) clamped_up_to = rep.k;
    }
    if (clamped_up_to > 0) {
        warnings.push_back("thm1_upper raw value exceeds 1 for k <= " +
                           std::to_string(clamped_up_to) + "; the clamped column caps it");
    }

    if (format == "json") {
        ojson rec = base_record("sweep");
        rec["inputs"] = params_json(params);
        rec["inputs"]["k_min"] = k_min;
        rec["inputs"]["k_max"] = k_max;
        rec["derived"] = derived_json(params);
        ojson rows = ojson::array();
        for (const auto& rep : table.rows) {
            ojson row = bound_results_json(rep);
            ojson full;
            full["k"] = rep.k;
            full.update(row);
            rows.push_back(full);
        }
        rec["results"] = ojson{{"rows", rows}};
        rec["warnings"] = warnings;
        print_json(rec);
    } else if (format == "csv") {
        std::fputs(csv_join(kBoundColumns).c_str(), stdout);
        for (const auto& rep : table.rows) std::fputs(csv_join(bound_row(rep)).c_str(), stdout);
    } else {
        std::fprintf(stdout, "%-5s %-13s %-13s %-13s %s\n", "k", "thm1_lower", "thm2_lower",
                     "thm2_upper", "thm1_upper");
        for (const auto& rep : table.rows) {
            std::fprintf(stdout, "%-5d %-13s %-13s %-13s %s\n", rep.k,
                         fmt_human(rep.thm1_lower_raw).c_str(), fmt_human(rep.thm2_lower_raw).c_str(),
                         fmt_human(rep.thm2_upper_raw).c_str(), fmt_human(rep.thm1_upper_raw).c_str());
        }
        print_warnings_human(warnings);
    }
    return 0;
}

BoundSelector parse_selector(const std::string& name) {
    if (name == "thm1u") return BoundSelector::Thm1Upper;
    if (name == "thm1l") return BoundSelector::Thm1Lower;
    if (name == "thm2u") return BoundSelector::Thm2Upper;
    return BoundSelector::Thm2Lower;
}

int run_depth(const ParamFlags& flags, double target, const std::string& bound_name, int k_max,
              const std::string& format) {
    const ProtocolParams params = resolve_params(flags);
    const auto solution = min_depth_for_risk(params, target, parse_selector(bound_name), k_max);

    if (format == "json") {
        ojson rec = base_record("depth");
        rec["inputs"] = params_json(params);
        rec["inputs"]["target"] = target;
        rec["inputs"]["bound"] = bound_name;
        rec["inputs"]["k_max"] = k_max;
        rec["derived"] = derived_json(params);
        ojson results;
        results["reachable"] = solution.has_value();
        if (solution) {
            results["k"] = solution->k;
            results["bound_value"] = solution->bound_value;
        }
        rec["results"] = results;
        rec["warnings"] = ojson::array();
        print_json(rec);
    } else if (format == "csv") {
        std::fputs(csv_join({"reachable", "k", "bound_value"}).c_str(), stdout);
        if (solution) {
            std::fputs(csv_join({"true", std::to_string(solution->k), fmt_full(solution->bound_value)}).c_str(),
                       stdout);
        } else {
            std::fputs(csv_join({"false", "", ""}).c_str(), stdout);
        }
    } else {
        if (solution) {
            std::fprintf(stdout, "minimal k = %d with %s = %s (target %s)\n", solution->k,
                         bound_name.c_str(), fmt_human(solution->bound_value).c_str(),
                         fmt_human(target).c_str());
        } else {
            std::fprintf(stdout, "target %s not reachable with %s for any k <= %d\n",
                         fmt_human(target).c_str(), bound_name.c_str(), k_max);
        }
    }
    return solution ? 0 : 3;
}

int run_simulate(const ParamFlags& flags, int k, const std::string& mode, std::uint64_t trials,
                 std::uint64_t seed, double burn_in, double epsilon_halt, unsigned threads,
                 const std::string& format) {
    const ProtocolParams params = resolve_params(flags);
    const ConfirmationDepth depth(k);

    Estimate est{};
    ojson closed_form;
    std::vector<std::string> warnings;
    double resolved_burn_in = 0.0;
    double horizon_fraction = 0.0;
    bool full_mode = false;

    if (mode == "reduced-upper") {
        est = estimate(EstimateMode::RiggedUpper, depth, params, trials, seed, threads);
        closed_form["thm2_upper"] = thm2_upper(depth, params);
    } else if (mode == "reduced-lower") {
        est = estimate(EstimateMode::Delta0Exact, depth, params, trials, seed, threads);
        closed_form["thm2_lower"] = thm2_lower(depth, params.rho());
    } else {
        full_mode = true;
        resolved_burn_in = burn_in > 0.0 ? burn_in : default_burn_in(params.p());
        const FullSimResult full =
            full_sim_estimate(params, depth, trials, resolved_burn_in, epsilon_halt, seed, threads);
        est = full.estimate;
        horizon_fraction = full.horizon_fraction;
        closed_form["thm2_lower"] = thm2_lower(depth, params.rho());
        closed_form["thm2_upper"] = thm2_upper(depth, params);
        if (full.horizon_fraction > 0.001) {
            warnings.push_back("horizon-halted trial fraction " + fmt_human(full.horizon_fraction) +
                               " exceeds 0.1%; lengthen the path horizon or loosen epsilon-halt");
        }
    }

    if (format == "json") {
        ojson rec = base_record("simulate");
        rec["inputs"] = params_json(params);
        rec["inputs"]["k"] = k;
        rec["inputs"]["mode"] = mode;
        rec["inputs"]["trials"] = trials;
        rec["inputs"]["seed"] = seed;
        if (full_mode) {
            rec["inputs"]["burn_in"] = resolved_burn_in;
            rec["inputs"]["epsilon_halt"] = epsilon_halt;
        }
        rec["derived"] = derived_json(params);
        ojson results;
        results["trials"] = est.trials;
        results["successes"] = est.successes;
        results["point"] = est.point;
        results["ci_halfwidth_3sigma"] = est.ci_halfwidth_3sigma;
        results["closed_form"] = closed_form;
        if (full_mode) results["horizon_fraction"] = horizon_fraction;
        rec["results"] = results;
        rec["warnings"] = warnings;
        print_json(rec);
    } else if (format == "csv") {
        std::vector<std::string> header = {"mode", "k", "trials", "successes", "point",
                                           "ci_halfwidth_3sigma"};
        std::vector<std::string> row = {mode, std::to_string(k), std::to_string(est.trials),
                                        std::to_string(est.successes), fmt_full(est.point),
                                        fmt_full(est.ci_halfwidth_3sigma)};
        for (auto it = closed_form.begin(); it != closed_form.end(); ++it) {
            header.push_back("closed_form_" + it.key());
            row.push_back(fmt_full(it.value().get<double>()));
        }
        if (full_mode) {
            header.push_back("horizon_fraction");
            row.push_back(fmt_full(horizon_fraction));
        }
        std::fputs(csv_join(header).c_str(), stdout);
        std::fputs(csv_join(row).c_str(), stdout);
    } else {
        std::fprintf(stdout, "mode %s, k = %d, %llu trials, seed %llu\n", mode.c_str(), k,
                     static_cast<unsigned long long>(trials), static_cast<unsigned long long>(seed));
        std::fprintf(stdout, "point estimate     %s\n", fmt_human(est.point).c_str());
        std::fprintf(stdout, "3-sigma halfwidth  %s\n", fmt_human(est.ci_halfwidth_3sigma).c_str());
        for (auto it = closed_form.begin(); it != closed_form.end(); ++it) {
            std::fprintf(stdout, "%-18s %s\n", it.key().c_str(),
                         fmt_human(it.value().get<double>()).c_str());
        }
        if (full_mode) {
            std::fprintf(stdout, "horizon fraction   %s\n", fmt_human(horizon_fraction).c_str());
        }
        print_warnings_human(warnings);
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"closed-form latency-security bounds for Nakamoto-style proof-of-work "
                 "consensus, with a Monte Carlo private-mining attack simulator"};
    app.require_subcommand(1);

    std::string format = "table";
    std::string config_path;
    const auto add_common = [&format, &config_path](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv", "table"}))
            ->capture_default_str();
        // consumed up front by expand_config; registered for help and parsing
        cmd->add_option("--config", config_path,
                        "flat key=value file with the same keys as the flags; "
                        "flags override file values");
    };

    ParamFlags bound_flags;
    int bound_k = 6;
    CLI::App* bound_cmd = app.add_subcommand("bound", "evaluate all four bounds at one depth");
    add_param_flags(*bound_cmd, bound_flags);
    bound_cmd->add_option("--k", bound_k, "confirmation depth")->required();
    add_common(bound_cmd);

    ParamFlags sweep_flags;
    int k_min = 1;
    int k_max_sweep = 30;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate the bounds over a depth range");
    add_param_flags(*sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--k-min", k_min, "first depth")->required();
    sweep_cmd->add_option("--k-max", k_max_sweep, "last depth")->required();
    add_common(sweep_cmd);

    ParamFlags depth_flags;
    double target = 0.0;
    std::string bound_name = "thm2u";
    int depth_k_max = 10000;
    CLI::App* depth_cmd =
        app.add_subcommand("depth", "smallest depth whose bound meets a risk target");
    add_param_flags(*depth_cmd, depth_flags);
    depth_cmd->add_option("--target", target, "risk target in (0, 1)")->required();
    depth_cmd->add_option("--bound", bound_name, "which bound to satisfy")
        ->check(CLI::IsMember({"thm1u", "thm1l", "thm2u", "thm2l"}))
        ->capture_default_str();
    depth_cmd->add_option("--k-max", depth_k_max, "scan limit")->capture_default_str();
    add_common(depth_cmd);

    ParamFlags sim_flags;
    int sim_k = 6;
    std::string mode;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    double burn_in = 0.0;
    double epsilon_halt = 1e-12;
    unsigned threads = 0;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo check of the bounds");
    add_param_flags(*sim_cmd, sim_flags);
    sim_cmd->add_option("--k", sim_k, "confirmation depth")->required();
    sim_cmd->add_option("--mode", mode, "reduced-upper, reduced-lower, or full")
        ->check(CLI::IsMember({"reduced-upper", "reduced-lower", "full"}))
        ->required();
    sim_cmd->add_option("--trials", trials, "trial count")->capture_default_str();
    sim_cmd->add_option("--seed", seed, "master seed; per-trial substreams derive from it")
        ->capture_default_str();
    sim_cmd->add_option("--burn-in", burn_in,
                        "full mode: expected pre-race arrivals (0 = auto heuristic)");
    sim_cmd->add_option("--epsilon-halt", epsilon_halt,
                        "full mode: abandon a race once the residual success probability "
                        "drops below this")
        ->capture_default_str();
    sim_cmd->add_option("--threads", threads, "worker threads (0 = hardware); does not affect results");
    add_common(sim_cmd);

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::vector<const char*> argv_expanded;
    argv_expanded.reserve(args.size() + 1);
    argv_expanded.push_back(argc > 0 ? argv[0] : "nakasec");
    for (const auto& arg : args) argv_expanded.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv_expanded.size()), argv_expanded.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bound_cmd->parsed()) return run_bound(bound_flags, bound_k, format);
        if (sweep_cmd->parsed()) return run_sweep(sweep_flags, k_min, k_max_sweep, format);
        if (depth_cmd->parsed())
            return run_depth(depth_flags, target, bound_name, depth_k_max, format);
        if (sim_cmd->parsed())
            return run_simulate(sim_flags, sim_k, mode, trials, seed, burn_in, epsilon_halt,
                                threads, format);
    } catch (const InvariantViolation& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

} // namespace nakasec::cli
