#include "fbmlab/report_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>
#include <type_traits>

namespace fbmlab {

using ojson = nlohmann::ordered_json;

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw ConfigError("unknown report format '" + name + "' (expected csv or json)");
}

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

const char* const kLevelCsvHeader =
    "level,k,mesh,sum_v,var_AT,paper_bound,mc_sup2_mean,mc_sup2_se,"
    "mc_sup_mean,mc_sup_se,jacod_T,energy";

const char* const kDoobMeyerCsvHeader =
    "level,k,mesh,sup_step_error,cesaro_sup_error,cesaro_at_probe,mart_max_tstat";

std::string levels_string(const DyadicRange& r) {
    return std::to_string(r.n_min) + ":" + std::to_string(r.n_max);
}

namespace {

// whole-string integer parse; stoi-style trailing garbage is rejected
int parse_level_number(const std::string& text) {
    int n = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto res = std::from_chars(first, last, n);
    if (res.ec != std::errc{} || res.ptr != last) throw std::invalid_argument(text);
    return n;
}

}  // namespace

DyadicRange parse_levels(const std::string& text) {
    const std::size_t colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const int n = parse_level_number(text);
            return {n, n};
        }
        return {parse_level_number(text.substr(0, colon)),
                parse_level_number(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("levels must look like n_min:n_max, got '" + text + "'");
    }
}

namespace {

ojson config_json(const ExperimentConfig& cfg) {
    ojson j;
    j["hurst"] = cfg.hurst;
    j["horizon"] = cfg.horizon;
    j["levels"] = levels_string(cfg.levels);
    j["paths"] = cfg.n_paths;
    j["seed"] = cfg.seed;
    if (cfg.ridge)
        j["ridge"] = *cfg.ridge;
    else
        j["ridge"] = nullptr;
    if (cfg.eps_sup)
        j["eps_sup"] = *cfg.eps_sup;
    else
        j["eps_sup"] = nullptr;
    j["probe_time"] = cfg.probe_time;
    j["allow_large"] = cfg.allow_large;
    return j;
}

ExperimentConfig config_from_json(const ojson& j) {
    ExperimentConfig cfg;
    cfg.hurst = j.at("hurst").get<double>();
    cfg.horizon = j.at("horizon").get<double>();
    cfg.levels = parse_levels(j.at("levels").get<std::string>());
    cfg.n_paths = j.at("paths").get<std::uint64_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("ridge") && !j.at("ridge").is_null()) cfg.ridge = j.at("ridge").get<double>();
    if (j.contains("eps_sup") && !j.at("eps_sup").is_null())
        cfg.eps_sup = j.at("eps_sup").get<double>();
    cfg.probe_time = j.at("probe_time").get<double>();
    cfg.allow_large = j.at("allow_large").get<bool>();
    return cfg;
}

ojson manifest_to_ojson(const RunManifest& m) {
    // duration stays out: re-running from the manifest must reproduce the
    // report byte for byte
    ojson j;
    j["command"] = m.command;
    j["format"] = m.format;
    j["version"] = m.version;
    j["seed"] = m.config.seed;
    j["config"] = config_json(m.config);
    return j;
}

RunManifest manifest_from_ojson(const ojson& j) {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.format = j.value("format", std::string("csv"));
    m.version = j.value("version", std::string());
    m.config = config_from_json(j.at("config"));
    return m;
}

ojson record_json(const LevelRecord& r) {
    ojson j;
    j["level"] = r.level;
    j["k"] = r.k;
    j["mesh"] = r.mesh;
    j["sum_v"] = r.sum_v;
    j["var_AT"] = r.var_at;
    j["paper_bound"] = r.paper_bound;
    j["mc_sup2_mean"] = r.mc_sup2_mean;
    j["mc_sup2_se"] = r.mc_sup2_se;
    j["mc_sup_mean"] = r.mc_sup_mean;
    j["mc_sup_se"] = r.mc_sup_se;
    j["jacod_T"] = r.jacod_t;
    j["energy"] = r.energy;
    return j;
}

LevelRecord record_from_json(const ojson& j) {
    LevelRecord r;
    r.level = j.at("level").get<int>();
    r.k = j.at("k").get<std::uint64_t>();
    r.mesh = j.at("mesh").get<double>();
    r.sum_v = j.at("sum_v").get<double>();
    r.var_at = j.at("var_AT").get<double>();
    r.paper_bound = j.at("paper_bound").get<double>();
    r.mc_sup2_mean = j.at("mc_sup2_mean").get<double>();
    r.mc_sup2_se = j.at("mc_sup2_se").get<double>();
    r.mc_sup_mean = j.at("mc_sup_mean").get<double>();
    r.mc_sup_se = j.at("mc_sup_se").get<double>();
    r.jacod_t = j.at("jacod_T").get<double>();
    r.energy = j.at("energy").get<double>();
    return r;
}

ojson doob_record_json(const DoobMeyerLevel& r) {
    ojson j;
    j["level"] = r.level;
    j["k"] = r.k;
    j["mesh"] = r.mesh;
    j["sup_step_error"] = r.sup_step_error;
    j["cesaro_sup_error"] = r.cesaro_sup_error;
    j["cesaro_at_probe"] = r.cesaro_at_probe;
    j["mart_max_tstat"] = r.mart_max_tstat;
    return j;
}

DoobMeyerLevel doob_record_from_json(const ojson& j) {
    DoobMeyerLevel r;
    r.level = j.at("level").get<int>();
    r.k = j.at("k").get<std::uint64_t>();
    r.mesh = j.at("mesh").get<double>();
    r.sup_step_error = j.at("sup_step_error").get<double>();
    r.cesaro_sup_error = j.at("cesaro_sup_error").get<double>();
    r.cesaro_at_probe = j.at("cesaro_at_probe").get<double>();
    r.mart_max_tstat = j.at("mart_max_tstat").get<double>();
    return r;
}

ojson parse_text(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed JSON input: ") + e.what());
    }
}

template <typename Report>
Report report_from_json_impl(const std::string& text) {
    const ojson j = parse_text(text);
    try {
        Report report;
        report.manifest = manifest_from_ojson(j.at("manifest"));
        for (const ojson& rec : j.at("levels")) {
            if constexpr (std::is_same_v<Report, ConvergenceReport>)
                report.levels.push_back(record_from_json(rec));
            else
                report.levels.push_back(doob_record_from_json(rec));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("report JSON misses a field: ") + e.what());
    }
}

}  // namespace

std::string to_csv(const ConvergenceReport& report) {
    std::string out = kLevelCsvHeader;
    out += '\n';
    for (const LevelRecord& r : report.levels) {
        out += std::to_string(r.level);
        out += ',';
        out += std::to_string(r.k);
        for (double x : {r.mesh, r.sum_v, r.var_at, r.paper_bound, r.mc_sup2_mean, r.mc_sup2_se,
                         r.mc_sup_mean, r.mc_sup_se, r.jacod_t, r.energy}) {
            out += ',';
            out += format_double(x);
        }
        out += '\n';
    }
    return out;
}

std::string to_csv(const DoobMeyerReport& report) {
    std::string out = kDoobMeyerCsvHeader;
    out += '\n';
    for (const DoobMeyerLevel& r : report.levels) {
        out += std::to_string(r.level);
        out += ',';
        out += std::to_string(r.k);
        for (double x : {r.mesh, r.sup_step_error, r.cesaro_sup_error, r.cesaro_at_probe,
                         r.mart_max_tstat}) {
            out += ',';
            out += format_double(x);
        }
        out += '\n';
    }
    return out;
}

std::string to_json_string(const ConvergenceReport& report) {
    ojson j;
    j["manifest"] = manifest_to_ojson(report.manifest);
    j["levels"] = ojson::array();
    for (const LevelRecord& r : report.levels) j["levels"].push_back(record_json(r));
    return j.dump(2) + "\n";
}

std::string to_json_string(const DoobMeyerReport& report) {
    ojson j;
    j["manifest"] = manifest_to_ojson(report.manifest);
    j["levels"] = ojson::array();
    for (const DoobMeyerLevel& r : report.levels) j["levels"].push_back(doob_record_json(r));
    return j.dump(2) + "\n";
}

std::string manifest_json(const RunManifest& manifest) {
    return manifest_to_ojson(manifest).dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    ojson j = parse_text(text);
    if (j.contains("manifest")) j = j.at("manifest");
    try {
        return manifest_from_ojson(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest JSON misses a field: ") + e.what());
    }
}

ConvergenceReport convergence_from_json(const std::string& text) {
    return report_from_json_impl<ConvergenceReport>(text);
}

DoobMeyerReport doob_meyer_from_json(const std::string& text) {
    return report_from_json_impl<DoobMeyerReport>(text);
}

}  // namespace fbmlab
