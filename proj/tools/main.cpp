#include "fbmlab/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace fbmlab;

struct SubOptions {
    ExperimentConfig cfg;
    std::string levels_text;
    std::optional<double> ridge;
    std::string format = "csv";
    std::string out;
    std::string config_path;
    bool probe_from_file = false;
    CLI::App* sub = nullptr;
};

struct SubSpec {
    const char* name;
    const char* description;
    double hurst;
    DyadicRange levels;
};

constexpr std::array<SubSpec, 7> kSubcommands{{
    {"converge", "H > 1/2: compensator sup deviation vanishes; asserts the Doob bound chain",
     0.75, {4, 10}},
    {"explode", "H < 1/2: terminal compensator variance blows up across levels", 0.25, {4, 10}},
    {"martingale", "H = 1/2: weights and compensator are identically zero", 0.5, {4, 10}},
    {"energy", "H > 1/2: discrete quadratic variation matches the vanishing energy", 0.75, {4, 10}},
    {"jacod", "conditional-variance sum at T: vanishes for H > 1/2, explodes for H < 1/2",
     0.75, {4, 10}},
    {"doobmeyer", "squared Brownian motion: compensator is the grid step function of t", 0.5,
     {1, 6}},
    {"weights", "dump predictor weights W and innovation variances v at k = 2^n_max", 0.75,
     {4, 4}},
}};

void add_common_options(CLI::App* sub, SubOptions& o, const SubSpec& spec) {
    o.cfg.hurst = spec.hurst;
    o.cfg.levels = spec.levels;
    o.levels_text = levels_string(spec.levels);
    o.sub = sub;
    sub->add_option("--hurst", o.cfg.hurst, "Hurst index in (0, 1)")->capture_default_str();
    sub->add_option("--horizon", o.cfg.horizon, "time horizon T")->capture_default_str();
    sub->add_option("--levels", o.levels_text, "dyadic levels n_min:n_max, grids of k = 2^n steps")
        ->capture_default_str();
    sub->add_option("--paths", o.cfg.n_paths, "Monte Carlo sample paths")->capture_default_str();
    sub->add_option("--seed", o.cfg.seed, "RNG seed; fixes every sampled path")
        ->capture_default_str();
    sub->add_option("--ridge", o.ridge, "diagonal ridge added before factorizing (default off)");
    sub->add_option("--eps-sup", o.cfg.eps_sup,
                    "opt-in cap on the finest-level 95th percentile of sup|X - A| (converge)");
    sub->add_option("--probe-time", o.cfg.probe_time,
                    "evaluation time for Cesaro means (default 0.4*horizon)");
    sub->add_flag("--allow-large", o.cfg.allow_large, "lift the 4096-step desk-scale guard");
    sub->add_option("--out", o.out, "output file (default stdout, or $FBMLAB_OUT_DIR/<cmd>.<ext>)");
    sub->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--config", o.config_path, "flat key=value config file; flags override file values")
        ->check(CLI::ExistingFile);
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
}

double config_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config value for '" + key + "' is not a number: '" + value + "'");
    }
}

std::uint64_t config_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(value, &used);
        if (used != value.size() || value.front() == '-') throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config value for '" + key + "' is not a whole number: '" + value +
                          "'");
    }
}

bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config value for '" + key + "' is not a boolean: '" + value + "'");
}

// Flat key=value lines; '#' starts a comment. A value only lands on settings
// whose flag was not given, which is the override rule the help text states.
void apply_config_file(SubOptions& o) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot read config file '" + o.config_path + "'");
    const auto flag_absent = [&o](const char* flag) { return o.sub->count(flag) == 0; };
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = trimmed(line);
        if (text.empty()) continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line is not key=value: '" + text + "'");
        std::string key = trimmed(text.substr(0, eq));
        const std::string value = trimmed(text.substr(eq + 1));
        for (char& c : key)
            if (c == '-') c = '_';

        if (key == "hurst") {
            if (flag_absent("--hurst")) o.cfg.hurst = config_double(key, value);
        } else if (key == "horizon") {
            if (flag_absent("--horizon")) o.cfg.horizon = config_double(key, value);
        } else if (key == "levels") {
            if (flag_absent("--levels")) o.levels_text = value;
        } else if (key == "paths") {
            if (flag_absent("--paths")) o.cfg.n_paths = config_u64(key, value);
        } else if (key == "seed") {
            if (flag_absent("--seed")) o.cfg.seed = config_u64(key, value);
        } else if (key == "ridge") {
            if (flag_absent("--ridge")) o.cfg.ridge = config_double(key, value);
        } else if (key == "eps_sup") {
            if (flag_absent("--eps-sup")) o.cfg.eps_sup = config_double(key, value);
        } else if (key == "probe_time") {
            if (flag_absent("--probe-time")) {
                o.cfg.probe_time = config_double(key, value);
                o.probe_from_file = true;
            }
        } else if (key == "allow_large") {
            if (flag_absent("--allow-large")) o.cfg.allow_large = config_bool(key, value);
        } else if (key == "format") {
            if (flag_absent("--format")) o.format = value;
        } else if (key == "out") {
            if (flag_absent("--out")) o.out = value;
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out.good()) throw std::runtime_error("cannot write output file '" + path + "'");
}

std::string format_extension(ReportFormat format) {
    return format == ReportFormat::csv ? ".csv" : ".json";
}

// --out wins; otherwise $FBMLAB_OUT_DIR names a directory; otherwise stdout
// (with the manifest on stderr for CSV, which cannot embed it).
int emit(const RunManifest& manifest, const std::string& body, ReportFormat format,
         const std::string& out_path, const std::vector<std::string>& violations) {
    std::string path = out_path;
    if (path.empty()) {
        if (const char* dir = std::getenv("FBMLAB_OUT_DIR"); dir && *dir) {
            std::filesystem::create_directories(dir);
            path = (std::filesystem::path(dir) / (manifest.command + format_extension(format)))
                       .string();
        }
    }
    if (!path.empty()) {
        write_file(path, body);
        if (format == ReportFormat::csv) write_file(path + ".manifest.json", manifest_json(manifest));
        std::cerr << "wrote " << path << "\n";
    } else {
        std::cout << body;
        if (format == ReportFormat::csv) std::cerr << manifest_json(manifest);
    }
    for (const std::string& v : violations) std::cerr << "bound violated: " << v << "\n";
    std::cerr << manifest.command << " finished in " << manifest.duration_seconds << " s\n";
    return violations.empty() ? 0 : 1;
}

int run_weights(ExperimentConfig cfg, ReportFormat format, const std::string& out_path) {
    cfg.validate();
    const std::size_t k = std::size_t{1} << cfg.levels.n_max;
    GaussianIncrementModel model(HurstIndex(cfg.hurst), uniform_partition(cfg.horizon, k));
    FactorOptions fopt{cfg.ridge.value_or(0.0)};
    auto [w, profile] = predictor_weights(model, fopt);

    RunManifest manifest;
    manifest.command = "weights";
    manifest.format = format == ReportFormat::csv ? "csv" : "json";
    manifest.config = cfg;
    manifest.version = FBMLAB_VERSION;

    std::string body;
    if (format == ReportFormat::csv) {
        body = "kind,j,i,value\n";
        for (std::size_t j = 0; j < k; ++j)
            body += "v," + std::to_string(j) + ",," + format_double(profile.v[j]) + "\n";
        for (std::size_t j = 1; j < k; ++j)
            for (std::size_t i = 0; i < j; ++i)
                body += "w," + std::to_string(j) + "," + std::to_string(i) + "," +
                        format_double(w.at(j, i)) + "\n";
    } else {
        nlohmann::ordered_json j;
        j["manifest"] = nlohmann::ordered_json::parse(manifest_json(manifest));
        j["k"] = k;
        j["v"] = profile.v;
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < k; ++r) {
            std::vector<double> row(w.row(r).begin(), w.row(r).end());
            rows.push_back(row);
        }
        j["w"] = rows;
        body = j.dump(2) + "\n";
    }
    return emit(manifest, body, format, out_path, {});
}

int run_and_emit(const std::string& command, const ExperimentConfig& cfg, ReportFormat format,
                 const std::string& out_path) {
    const std::string format_name = format == ReportFormat::csv ? "csv" : "json";
    if (command == "weights") return run_weights(cfg, format, out_path);
    if (command == "doobmeyer") {
        DoobMeyerOutcome o = run_doob_meyer_demo(cfg);
        o.report.manifest.format = format_name;
        const std::string body =
            format == ReportFormat::csv ? to_csv(o.report) : to_json_string(o.report);
        return emit(o.report.manifest, body, format, out_path, o.violations);
    }
    RunOutcome o;
    if (command == "converge")
        o = run_uniform_convergence(cfg);
    else if (command == "explode")
        o = run_explosion(cfg);
    else if (command == "martingale")
        o = run_martingale_null(cfg);
    else if (command == "energy")
        o = run_energy_zero(cfg);
    else if (command == "jacod")
        o = run_jacod(cfg);
    else
        throw ConfigError("unknown command '" + command + "'");
    o.report.manifest.format = format_name;
    if (!o.cesaro_trace.empty()) {
        std::ostringstream trace;
        trace << "cesaro mean of A at t = " << format_double(cfg.probe_time) << " across levels:";
        for (double x : o.cesaro_trace) trace << ' ' << format_double(x);
        std::cerr << trace.str() << "\n";
    }
    const std::string body =
        format == ReportFormat::csv ? to_csv(o.report) : to_json_string(o.report);
    return emit(o.report.manifest, body, format, out_path, o.violations);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete predictable compensators of fractional Brownian motion on condensing grids"};
    app.require_subcommand(1);
    app.set_version_flag("--version", FBMLAB_VERSION);

    std::array<SubOptions, kSubcommands.size()> options;
    for (std::size_t i = 0; i < kSubcommands.size(); ++i) {
        CLI::App* sub = app.add_subcommand(kSubcommands[i].name, kSubcommands[i].description);
        add_common_options(sub, options[i], kSubcommands[i]);
    }

    std::string manifest_path, replay_out;
    CLI::App* replay = app.add_subcommand(
        "replay", "re-run from a manifest (or JSON report) and reproduce its report exactly");
    replay->add_option("manifest", manifest_path, "manifest or JSON report file")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--out", replay_out, "output file (default stdout or $FBMLAB_OUT_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (replay->parsed()) {
            std::ifstream in(manifest_path, std::ios::binary);
            std::ostringstream text;
            text << in.rdbuf();
            if (!in.good() && !in.eof())
                throw std::runtime_error("cannot read '" + manifest_path + "'");
            const RunManifest m = manifest_from_json(text.str());
            return run_and_emit(m.command, m.config, parse_format(m.format), replay_out);
        }
        for (std::size_t i = 0; i < kSubcommands.size(); ++i) {
            SubOptions& o = options[i];
            if (!o.sub->parsed()) continue;
            if (o.sub->count("--ridge") > 0) o.cfg.ridge = o.ridge;
            if (!o.config_path.empty()) apply_config_file(o);
            o.cfg.levels = parse_levels(o.levels_text);
            if (o.sub->count("--probe-time") == 0 && !o.probe_from_file)
                o.cfg.probe_time = 0.4 * o.cfg.horizon;
            return run_and_emit(kSubcommands[i].name, o.cfg, parse_format(o.format), o.out);
        }
        std::cerr << "no subcommand given\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "numerical failure: " << e.what()
                  << " (an explicit --ridge can stabilize exploratory runs)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
