#include "fbmlab/experiments.hpp"

#include "fbmlab/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <utility>

#ifndef FBMLAB_VERSION
#define FBMLAB_VERSION "0.0.0"
#endif

namespace fbmlab {

namespace {

constexpr double kAbsTol = 1e-10;  // exact assertions near zero
constexpr double kRelTol = 1e-8;   // exact assertions, relative

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

void require(bool ok, std::vector<std::string>& violations, std::string message) {
    if (!ok) violations.push_back(std::move(message));
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    double s = 0.0;
    for (double x : xs) s += x;
    MeanSe r;
    r.mean = s / static_cast<double>(n);
    if (n < 2) return r;
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - r.mean;
        ss += d * d;
    }
    r.se = std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
    return r;
}

struct VarSe {
    double var = 0.0;
    double se = 0.0;
};

// SE of the sample variance from the fourth central moment:
// Var(s^2) ~ (m4 - s^4 (n-3)/(n-1)) / n
VarSe variance_se(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    VarSe r;
    if (xs.size() < 2) return r;
    double s = 0.0;
    for (double x : xs) s += x;
    const double mean = s / n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    r.var = m2 / (n - 1.0);
    m4 /= n;
    const double v = (m4 - r.var * r.var * (n - 3.0) / (n - 1.0)) / n;
    r.se = v > 0.0 ? std::sqrt(v) : 0.0;
    return r;
}

// k-th order statistic with k = ceil(0.95 n)
double percentile95(std::vector<double> xs) {
    const std::size_t n = xs.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    rank = std::min(std::max<std::size_t>(rank, 1), n);
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(rank - 1), xs.end());
    return xs[rank - 1];
}

RunManifest make_manifest(std::string command, const ExperimentConfig& cfg) {
    RunManifest m;
    m.command = std::move(command);
    m.config = cfg;
    m.version = FBMLAB_VERSION;
    return m;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct LevelData {
    LevelRecord rec;
    LevelStats stats;
};

// One dyadic level: exact columns from the conditioning engine, Monte Carlo
// columns from per-path slots reduced serially, so the result does not
// depend on how paths were scheduled.
LevelData compute_level(const ExperimentConfig& cfg, int level) {
    const std::size_t k = std::size_t{1} << level;
    GaussianIncrementModel model(HurstIndex(cfg.hurst), uniform_partition(cfg.horizon, k));
    FactorOptions fopt{cfg.ridge.value_or(0.0)};
    const std::vector<double> autocov = model.stationary_autocovariances();
    auto [w, profile] = weights_levinson(autocov, fopt);
    const TriangularFactor factor = factorize_toeplitz(autocov, fopt);

    LevelData d;
    LevelRecord& rec = d.rec;
    rec.level = level;
    rec.k = k;
    rec.mesh = model.partition().mesh();
    rec.sum_v = profile.sum();
    rec.var_at = terminal_compensator_variance(w, increment_covariance(model));
    rec.paper_bound = 4.0 * cfg.horizon * std::pow(rec.mesh, 2.0 * cfg.hurst - 1.0);
    rec.jacod_t = jacod_sum(profile, model.partition(), cfg.horizon);
    rec.energy = analytic_energy(model);

    const std::size_t n = cfg.n_paths;
    std::vector<double> sup(n), sup2(n), a_t(n), qv(n), sup_a(n);
    const PathSampler sampler(factor, cfg.seed);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        std::vector<double> dx(k), da(k);
        sampler.sample(static_cast<std::uint64_t>(i), dx);
        compensator_increments(w, dx, da);
        double x = 0.0, a = 0.0, s = 0.0, sa = 0.0, q = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            x += dx[j];
            a += da[j];
            s = std::max(s, std::abs(x - a));
            sa = std::max(sa, std::abs(a));
            q += dx[j] * dx[j];
        }
        const std::size_t slot = static_cast<std::size_t>(i);
        sup[slot] = s;
        sup2[slot] = s * s;
        a_t[slot] = a;
        qv[slot] = q;
        sup_a[slot] = sa;
    }

    const MeanSe s2 = mean_se(sup2);
    rec.mc_sup2_mean = s2.mean;
    rec.mc_sup2_se = s2.se;
    const MeanSe s1 = mean_se(sup);
    rec.mc_sup_mean = s1.mean;
    rec.mc_sup_se = s1.se;

    LevelStats& st = d.stats;
    st.sup_p95 = percentile95(sup);
    const VarSe va = variance_se(a_t);
    st.mc_var_at = va.var;
    st.mc_var_at_se = va.se;
    const MeanSe en = mean_se(qv);
    st.mc_energy_mean = en.mean;
    st.mc_energy_se = en.se;
    st.mc_max_sup_a = *std::max_element(sup_a.begin(), sup_a.end());
    st.weight_max_abs = w.max_abs();
    return d;
}

RunOutcome run_levels(std::string command, const ExperimentConfig& cfg) {
    RunOutcome out;
    out.report.manifest = make_manifest(std::move(command), cfg);
    for (int n = cfg.levels.n_min; n <= cfg.levels.n_max; ++n) {
        LevelData d = compute_level(cfg, n);
        out.report.levels.push_back(d.rec);
        out.stats.push_back(d.stats);
    }
    return out;
}

// Running Cesaro means of one fBm trajectory's compensators across levels,
// evaluated at the probe time. The path is drawn once on the finest grid and
// aggregated downward, so every level sees the same trajectory.
std::vector<double> explosion_cesaro_trace(const ExperimentConfig& cfg) {
    const std::size_t k_fine = std::size_t{1} << cfg.levels.n_max;
    GaussianIncrementModel fine(HurstIndex(cfg.hurst), uniform_partition(cfg.horizon, k_fine));
    FactorOptions fopt{cfg.ridge.value_or(0.0)};
    const TriangularFactor factor = factorize_toeplitz(fine.stationary_autocovariances(), fopt);
    std::vector<double> dx_fine(k_fine);
    // path index one past the Monte Carlo block, so the trace trajectory is fresh
    PathSampler(factor, cfg.seed).sample(cfg.n_paths, dx_fine);

    std::vector<StepFunction> comps;
    std::vector<double> trace;
    for (int n = cfg.levels.n_min; n <= cfg.levels.n_max; ++n) {
        const std::size_t k = std::size_t{1} << n;
        const std::size_t stride = k_fine / k;
        Partition part = uniform_partition(cfg.horizon, k);
        std::vector<double> dx(k, 0.0);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t p = 0; p < stride; ++p) dx[j] += dx_fine[j * stride + p];
        GaussianIncrementModel model(HurstIndex(cfg.hurst), part);
        auto [w, profile] = weights_levinson(model.stationary_autocovariances(), fopt);
        std::vector<double> da(k), a(k + 1, 0.0);
        compensator_increments(w, dx, da);
        for (std::size_t j = 0; j < k; ++j) a[j + 1] = a[j] + da[j];
        comps.emplace_back(std::move(part), std::move(a));
        trace.push_back(cesaro_average(comps, cfg.probe_time));
    }
    return trace;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("hurst must lie in the open interval (0, 1)");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive and finite");
    if (levels.n_min < 0 || levels.n_min > levels.n_max)
        throw ConfigError("levels must satisfy 0 <= n_min <= n_max");
    if (levels.n_max > 22) throw ConfigError("levels beyond 2^22 steps are not supported");
    if (!allow_large && (std::size_t{1} << levels.n_max) > 4096)
        throw ConfigError("2^n_max exceeds the desk-scale guard of 4096 steps (allow-large overrides)");
    if (n_paths < 1) throw ConfigError("need at least one path");
    if (ridge && !(*ridge >= 0.0)) throw ConfigError("ridge must be >= 0");
    if (eps_sup && !(*eps_sup > 0.0)) throw ConfigError("eps-sup must be positive");
    if (!(probe_time >= 0.0 && probe_time <= horizon))
        throw ConfigError("probe time must lie in [0, horizon]");
}

RunOutcome run_uniform_convergence(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.hurst > 0.5)) throw ConfigError("converge requires hurst > 1/2");
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out = run_levels("converge", cfg);
    const auto& recs = out.report.levels;
    auto& bad = out.violations;
    for (const LevelRecord& r : recs) {
        const std::string at = "level " + std::to_string(r.level) + ": ";
        require(r.mc_sup2_mean <= 4.0 * r.sum_v + 4.0 * r.mc_sup2_se, bad,
                at + "mc_sup2_mean " + fmt(r.mc_sup2_mean) + " exceeds 4*sum_v + 4*se = " +
                    fmt(4.0 * r.sum_v + 4.0 * r.mc_sup2_se));
        const double cap = 0.25 * r.paper_bound;  // T |theta|^{2H-1}
        require(r.sum_v <= cap + kAbsTol, bad,
                at + "sum_v " + fmt(r.sum_v) + " exceeds T*mesh^(2H-1) = " + fmt(cap));
    }
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const std::string at = "levels " + std::to_string(recs[i].level) + "->" +
                               std::to_string(recs[i + 1].level) + ": ";
        require(recs[i + 1].mc_sup2_mean <=
                    recs[i].mc_sup2_mean + 2.0 * std::hypot(recs[i].mc_sup2_se, recs[i + 1].mc_sup2_se),
                bad, at + "mc_sup2_mean fails to decrease (beyond 2 SE)");
        require(recs[i + 1].mc_sup_mean <=
                    recs[i].mc_sup_mean + 2.0 * std::hypot(recs[i].mc_sup_se, recs[i + 1].mc_sup_se),
                bad, at + "mc_sup_mean fails to decrease (beyond 2 SE)");
        if (cfg.eps_sup)
            require(out.stats[i + 1].sup_p95 < out.stats[i].sup_p95, bad,
                    at + "95th percentile of sup|X - A| fails to decrease strictly");
    }
    // Percentile discipline is opt-in; the inequality chain above is always on.
    if (cfg.eps_sup)
        require(out.stats.back().sup_p95 <= *cfg.eps_sup, bad,
                "finest level: 95th percentile " + fmt(out.stats.back().sup_p95) +
                    " exceeds eps_sup = " + fmt(*cfg.eps_sup));
    out.report.manifest.duration_seconds = seconds_since(t0);
    return out;
}

RunOutcome run_energy_zero(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.hurst > 0.5)) throw ConfigError("energy requires hurst > 1/2");
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out = run_levels("energy", cfg);
    auto& bad = out.violations;
    for (std::size_t i = 0; i < out.report.levels.size(); ++i) {
        const LevelRecord& r = out.report.levels[i];
        const LevelStats& st = out.stats[i];
        require(std::abs(st.mc_energy_mean - r.energy) <= 4.0 * st.mc_energy_se, bad,
                "level " + std::to_string(r.level) + ": MC quadratic variation " +
                    fmt(st.mc_energy_mean) + " is more than 4 SE from the energy " + fmt(r.energy));
        if (i + 1 < out.report.levels.size())
            require(out.report.levels[i + 1].energy < r.energy, bad,
                    "level " + std::to_string(r.level) + ": energy fails to decrease strictly");
    }
    out.report.manifest.duration_seconds = seconds_since(t0);
    return out;
}

RunOutcome run_martingale_null(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.hurst != 0.5) throw ConfigError("martingale requires hurst = 1/2 exactly");
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out = run_levels("martingale", cfg);
    auto& bad = out.violations;
    for (std::size_t i = 0; i < out.report.levels.size(); ++i) {
        const LevelRecord& r = out.report.levels[i];
        const LevelStats& st = out.stats[i];
        const std::string at = "level " + std::to_string(r.level) + ": ";
        require(st.weight_max_abs <= kAbsTol, bad,
                at + "max |W| = " + fmt(st.weight_max_abs) + " exceeds 1e-10");
        require(r.var_at <= 1e-16, bad, at + "Var(A_T) = " + fmt(r.var_at) + " exceeds 1e-16");
        require(st.mc_max_sup_a <= kAbsTol, bad,
                at + "a sampled compensator path reaches " + fmt(st.mc_max_sup_a));
    }
    out.report.manifest.duration_seconds = seconds_since(t0);
    return out;
}

RunOutcome run_explosion(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.hurst < 0.5)) throw ConfigError("explode requires hurst < 1/2");
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out = run_levels("explode", cfg);
    auto& bad = out.violations;
    const double th = std::pow(cfg.horizon, cfg.hurst);  // E(X_T^2) = T^{2H}
    for (std::size_t i = 0; i < out.report.levels.size(); ++i) {
        const LevelRecord& r = out.report.levels[i];
        const LevelStats& st = out.stats[i];
        const std::string at = "level " + std::to_string(r.level) + ": ";
        require(r.sum_v >= 0.5 * r.energy - kRelTol, bad,
                at + "sum_v " + fmt(r.sum_v) + " falls below half the energy " + fmt(r.energy));
        if (std::sqrt(r.sum_v) > th) {
            const double lower = (std::sqrt(r.sum_v) - th) * (std::sqrt(r.sum_v) - th);
            require(r.var_at >= lower - (kRelTol * lower + kAbsTol), bad,
                    at + "Var(A_T) " + fmt(r.var_at) + " falls below (sqrt(sum_v) - T^H)^2 = " +
                        fmt(lower));
        }
        require(std::abs(st.mc_var_at - r.var_at) <= 4.0 * st.mc_var_at_se, bad,
                at + "MC variance of A_T " + fmt(st.mc_var_at) + " is more than 4 SE from " +
                    fmt(r.var_at));
        if (i + 1 < out.report.levels.size())
            require(out.report.levels[i + 1].var_at > r.var_at, bad,
                    at + "Var(A_T) fails to increase strictly");
    }
    out.cesaro_trace = explosion_cesaro_trace(cfg);
    out.report.manifest.duration_seconds = seconds_since(t0);
    return out;
}

RunOutcome run_jacod(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out = run_levels("jacod", cfg);
    auto& bad = out.violations;
    for (const LevelRecord& r : out.report.levels) {
        const std::string at = "level " + std::to_string(r.level) + ": ";
        const double scale = cfg.horizon * std::pow(r.mesh, 2.0 * cfg.hurst - 1.0);
        if (cfg.hurst > 0.5) {
            require(r.jacod_t <= scale + kAbsTol, bad,
                    at + "jacod_T " + fmt(r.jacod_t) + " exceeds T*mesh^(2H-1) = " + fmt(scale));
        } else if (cfg.hurst < 0.5) {
            require(r.jacod_t >= 0.5 * scale - kRelTol, bad,
                    at + "jacod_T " + fmt(r.jacod_t) + " falls below T*mesh^(2H-1)/2 = " +
                        fmt(0.5 * scale));
        } else {
            require(std::abs(r.jacod_t - cfg.horizon) <= kAbsTol * std::max(1.0, cfg.horizon), bad,
                    at + "jacod_T " + fmt(r.jacod_t) + " differs from T = " + fmt(cfg.horizon));
        }
    }
    out.report.manifest.duration_seconds = seconds_since(t0);
    return out;
}

namespace {

// E((dX_j - dt_j) g) for g in {1, B, B^2} evaluated at the left endpoint;
// returns the largest |mean|/SE over (j, g). Serial on purpose: the sums
// must not depend on thread count.
double squared_bm_martingale_tstat(const ExperimentConfig& cfg, const Partition& part) {
    const std::size_t k = part.steps();
    const std::size_t n = cfg.n_paths;
    std::vector<double> autocov(k, 0.0);
    autocov[0] = part.dt(0);
    const TriangularFactor factor = factorize_toeplitz(autocov, {});
    const PathSampler sampler(factor, cfg.seed);
    std::vector<double> db(k);
    std::vector<double> sum(3 * k, 0.0), sum2(3 * k, 0.0);
    for (std::uint64_t i = 0; i < n; ++i) {
        sampler.sample(i, db);
        double b = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double dm = 2.0 * b * db[j] + db[j] * db[j] - part.dt(j);
            const double g[3] = {1.0, b, b * b};
            for (std::size_t c = 0; c < 3; ++c) {
                const double y = dm * g[c];
                sum[c * k + j] += y;
                sum2[c * k + j] += y * y;
            }
            b += db[j];
        }
    }
    double worst = 0.0;
    for (std::size_t c = 0; c < 3 * k; ++c) {
        const double mean = sum[c] / static_cast<double>(n);
        const double ss = std::max(0.0, sum2[c] - static_cast<double>(n) * mean * mean);
        const double se = std::sqrt(ss / (static_cast<double>(n - 1) * static_cast<double>(n)));
        if (se == 0.0) continue;  // identically zero statistic (j = 0 with g = B, B^2)
        worst = std::max(worst, std::abs(mean) / se);
    }
    return worst;
}

}  // namespace

DoobMeyerOutcome run_doob_meyer_demo(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.hurst != 0.5)
        throw ConfigError("doobmeyer drives squared Brownian motion; it requires hurst = 1/2");
    const auto t0 = std::chrono::steady_clock::now();
    DoobMeyerOutcome out;
    out.report.manifest = make_manifest("doobmeyer", cfg);
    auto& bad = out.violations;
    std::vector<StepFunction> comps;
    double coarsest_mesh = 0.0;
    for (int n = cfg.levels.n_min; n <= cfg.levels.n_max; ++n) {
        const std::size_t k = std::size_t{1} << n;
        Partition part = uniform_partition(cfg.horizon, k);
        // E(B^2 increment | past) = dt, so A_{t_i} = t_i exactly
        std::vector<double> a(k + 1);
        for (std::size_t i = 0; i <= k; ++i) a[i] = part.time(i);
        DoobMeyerLevel rec;
        rec.level = n;
        rec.k = k;
        rec.mesh = part.mesh();
        if (comps.empty()) coarsest_mesh = rec.mesh;
        rec.mart_max_tstat = squared_bm_martingale_tstat(cfg, part);
        comps.emplace_back(part, std::move(a));
        // probe on a 10x finer grid than the current level
        const std::size_t probes = 10 * k;
        double step_err = 0.0, ces_err = 0.0;
        for (std::size_t i = 0; i <= probes; ++i) {
            const double t = cfg.horizon * static_cast<double>(i) / static_cast<double>(probes);
            step_err = std::max(step_err, std::abs(comps.back().at(t) - t));
            ces_err = std::max(ces_err, std::abs(cesaro_average(comps, t) - t));
        }
        rec.sup_step_error = step_err;
        rec.cesaro_sup_error = ces_err;
        rec.cesaro_at_probe = cesaro_average(comps, cfg.probe_time);
        const std::string at = "level " + std::to_string(n) + ": ";
        require(rec.sup_step_error <= rec.mesh + 1e-12, bad,
                at + "sup |A_t - t| = " + fmt(rec.sup_step_error) + " exceeds the mesh " +
                    fmt(rec.mesh));
        require(rec.cesaro_sup_error <= coarsest_mesh + 1e-12, bad,
                at + "Cesaro error " + fmt(rec.cesaro_sup_error) + " exceeds the coarsest mesh " +
                    fmt(coarsest_mesh));
        require(rec.mart_max_tstat <= 4.0, bad,
                at + "martingale check t-statistic " + fmt(rec.mart_max_tstat) + " exceeds 4");
        out.report.levels.push_back(std::move(rec));
    }
    out.report.manifest.duration_seconds = seconds_since(t0);
    return out;
}

}  // namespace fbmlab
