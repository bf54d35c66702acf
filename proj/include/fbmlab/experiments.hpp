#pragma once

#include "fbmlab/compensator.hpp"
#include "fbmlab/engine.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbmlab {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DyadicRange {
    int n_min = 4;
    int n_max = 10;
};

struct ExperimentConfig {
    double hurst = 0.75;
    double horizon = 1.0;
    DyadicRange levels{};
    std::uint64_t n_paths = 10000;
    std::uint64_t seed = 42;
    std::optional<double> ridge;    // opt-in diagonal shift, default absent
    std::optional<double> eps_sup;  // opt-in cap on the finest-level 95th percentile (converge)
    double probe_time = 0.4;      // evaluation time for the Doob-Meyer demo
    bool allow_large = false;     // lifts the 2^n_max <= 4096 desk-scale guard

    void validate() const;  // throws ConfigError
};

// The pinned report schema: one record per level, exact columns computed
// without sampling, Monte Carlo columns from n_paths trajectories.
struct LevelRecord {
    int level = 0;
    std::uint64_t k = 0;
    double mesh = 0.0;
    double sum_v = 0.0;        // sum of innovation variances = E(X_T - A_T)^2
    double var_at = 0.0;       // exact Var(A_T) = u' cov u
    double paper_bound = 0.0;  // 4 T |theta|^{2H-1}
    double mc_sup2_mean = 0.0;
    double mc_sup2_se = 0.0;
    double mc_sup_mean = 0.0;
    double mc_sup_se = 0.0;
    double jacod_t = 0.0;  // conditional-variance sum at T
    double energy = 0.0;   // sum (dt_j)^{2H}

    bool operator==(const LevelRecord&) const = default;
};

struct RunManifest {
    std::string command;
    std::string format;  // report serialization the run was asked for
    ExperimentConfig config;
    std::string version;
    double duration_seconds = 0.0;  // logged to stderr, never serialized into reports
};

struct ConvergenceReport {
    RunManifest manifest;
    std::vector<LevelRecord> levels;
};

// Per-level side statistics consumed in-process (acceptance suite, CLI
// assertions); not part of the pinned report schema.
struct LevelStats {
    double sup_p95 = 0.0;
    double mc_var_at = 0.0;
    double mc_var_at_se = 0.0;
    double mc_energy_mean = 0.0;
    double mc_energy_se = 0.0;
    double mc_max_sup_a = 0.0;   // max over paths of sup_t |A_t|
    double weight_max_abs = 0.0; // max |W| entry at this level
};

struct RunOutcome {
    ConvergenceReport report;
    std::vector<LevelStats> stats;       // parallel to report.levels
    std::vector<std::string> violations; // asserted bounds that failed; exit-1 hook
    std::vector<double> cesaro_trace;    // explode only: running Cesaro mean of
                                         // A^{theta_n} at probe_time, one path
};

// Smooth regime. Requires H > 1/2. Asserts the bound chain
// E sup (X-A)^2 <= 4 sum v <= 4 T |theta|^{2H-1} and decreasing sup stats.
RunOutcome run_uniform_convergence(const ExperimentConfig& cfg);

// Energy-zero regime. Requires H > 1/2. Asserts MC [X]_T vs analytic energy
// within 4 SE and energies decreasing across levels.
RunOutcome run_energy_zero(const ExperimentConfig& cfg);

// H = 1/2: weights vanish, compensator identically zero.
RunOutcome run_martingale_null(const ExperimentConfig& cfg);

// H < 1/2: sum v >= (1/2) sum dt^{2H}, Var(A_T) increasing and exploding.
RunOutcome run_explosion(const ExperimentConfig& cfg);

// Conditional-variance sum dichotomy at T for any H.
RunOutcome run_jacod(const ExperimentConfig& cfg);

// Squared Brownian motion demo: the discrete compensator of X = B^2 is the
// grid step function of t; Cesaro means converge to t.
struct DoobMeyerLevel {
    int level = 0;
    std::uint64_t k = 0;
    double mesh = 0.0;
    double sup_step_error = 0.0;   // max over probe grid of |A_t - t|
    double cesaro_sup_error = 0.0; // same for the Cesaro mean over levels so far
    double cesaro_at_probe = 0.0;  // Cesaro mean value at probe_time
    double mart_max_tstat = 0.0;   // MC martingale check, max |t| over (j, g)

    bool operator==(const DoobMeyerLevel&) const = default;
};

struct DoobMeyerReport {
    RunManifest manifest;
    std::vector<DoobMeyerLevel> levels;
};

struct DoobMeyerOutcome {
    DoobMeyerReport report;
    std::vector<std::string> violations;
};

DoobMeyerOutcome run_doob_meyer_demo(const ExperimentConfig& cfg);

}  // namespace fbmlab
