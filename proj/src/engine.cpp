#include "fbmlab/engine.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fbmlab {

namespace {

constexpr double kPivotRel = 1e-13;  // pivot <= kPivotRel * max diagonal fails

std::string npd_message(std::size_t index, double pivot) {
    return "matrix not positive definite: pivot " + std::to_string(pivot) +
           " at index " + std::to_string(index);
}

// splitmix64 output function; bijective on 64-bit words
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(std::size_t index, double pivot)
    : std::runtime_error(npd_message(index, pivot)), index_(index), pivot_(pivot) {}

void TriangularFactor::apply(std::span<const double> z, std::span<double> out) const {
    // rows from the bottom, so out may alias z
    for (std::size_t j = dim_; j-- > 0;) {
        std::span<const double> r = row(j);
        double acc = 0.0;
        for (std::size_t i = 0; i <= j; ++i) acc += r[i] * z[i];
        out[j] = acc;
    }
}

TriangularFactor factorize(const SymmetricMatrix& cov, const FactorOptions& opt) {
    const std::size_t dim = cov.dim();
    TriangularFactor L(dim);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < dim; ++i) max_diag = std::max(max_diag, cov(i, i) + opt.ridge);
    const double tol = kPivotRel * max_diag;
    for (std::size_t j = 0; j < dim; ++j) {
        std::span<double> lj = L.row(j);
        for (std::size_t i = 0; i < j; ++i) {
            std::span<const double> li = L.row(i);
            double s = cov(j, i);
            for (std::size_t p = 0; p < i; ++p) s -= lj[p] * li[p];
            lj[i] = s / li[i];
        }
        double d = cov(j, j) + opt.ridge;
        for (std::size_t p = 0; p < j; ++p) d -= lj[p] * lj[p];
        if (!(d > tol)) throw NotPositiveDefinite(j, d);
        lj[j] = std::sqrt(d);
    }
    return L;
}

TriangularFactor factorize_toeplitz(std::span<const double> autocov, const FactorOptions& opt) {
    // generalized Schur recursion on the generator pair (g, h); the column
    // emitted at step i is g[i..], and the pivot g[i]^2 - h[i]^2 is the
    // innovation variance v_i
    const std::size_t n = autocov.size();
    TriangularFactor L(n);
    const double r0 = autocov[0] + opt.ridge;
    const double tol = kPivotRel * r0;  // Toeplitz: every diagonal entry is r0
    if (!(r0 > 0.0) || !(r0 > tol)) throw NotPositiveDefinite(0, r0);
    const double scale = 1.0 / std::sqrt(r0);
    std::vector<double> g(n), h(n);
    g[0] = r0 * scale;
    h[0] = 0.0;
    for (std::size_t p = 1; p < n; ++p) h[p] = g[p] = autocov[p] * scale;
    for (std::size_t p = 0; p < n; ++p) L.row(p)[0] = g[p];
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t p = n; p-- > i;) g[p] = g[p - 1];
        const double d = (g[i] - h[i]) * (g[i] + h[i]);
        if (!(d > tol)) throw NotPositiveDefinite(i, d);
        const double rho = h[i] / g[i];
        const double c = 1.0 / std::sqrt((1.0 - rho) * (1.0 + rho));
        for (std::size_t p = i; p < n; ++p) {
            const double gp = g[p];
            g[p] = c * (gp - rho * h[p]);
            h[p] = c * (h[p] - rho * gp);
        }
        for (std::size_t p = i; p < n; ++p) L.row(p)[i] = g[p];
    }
    return L;
}

double PredictorWeights::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> PredictorWeights::terminal_coefficients() const {
    std::vector<double> u(dim_, 0.0);
    for (std::size_t j = 1; j < dim_; ++j) {
        std::span<const double> r = row(j);
        for (std::size_t i = 0; i < j; ++i) u[i] += r[i];
    }
    return u;
}

double ConditionalProfile::sum() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

std::pair<PredictorWeights, ConditionalProfile>
weights_from_factor(const TriangularFactor& factor) {
    // row j of L solves the conditioning problem of order j: with
    // ell = L[j][0..j), the weights satisfy L11' w = ell and v_j = L[j][j]^2
    const std::size_t k = factor.dim();
    PredictorWeights w(k);
    ConditionalProfile profile;
    profile.v.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        profile.v[j] = factor.diag(j) * factor.diag(j);
        std::span<const double> ell = factor.row(j);
        std::span<double> wj = w.row(j);
        for (std::size_t i = j; i-- > 0;) {
            double s = ell[i];
            for (std::size_t p = i + 1; p < j; ++p) s -= factor.at(p, i) * wj[p];
            wj[i] = s / factor.diag(i);
        }
    }
    return {std::move(w), std::move(profile)};
}

std::pair<PredictorWeights, ConditionalProfile>
weights_levinson(std::span<const double> autocov, const FactorOptions& opt) {
    // Levinson-Durbin: phi_{m,j} regresses dX_m on dX_{m-j}, j = 1..m;
    // v_m = v_{m-1} (1 - kappa_m^2) with reflection coefficient kappa_m
    const std::size_t k = autocov.size();
    PredictorWeights w(k);
    ConditionalProfile profile;
    profile.v.resize(k);
    const double r0 = autocov[0] + opt.ridge;
    const double tol = kPivotRel * r0;
    if (!(r0 > 0.0) || !(r0 > tol)) throw NotPositiveDefinite(0, r0);
    profile.v[0] = r0;
    std::vector<double> phi(k, 0.0), prev(k, 0.0);
    for (std::size_t m = 1; m < k; ++m) {
        double acc = autocov[m];
        for (std::size_t j = 1; j < m; ++j) acc -= prev[j] * autocov[m - j];
        const double kappa = acc / profile.v[m - 1];
        const double vm = profile.v[m - 1] * (1.0 - kappa) * (1.0 + kappa);
        if (!(vm > tol)) throw NotPositiveDefinite(m, vm);
        phi[m] = kappa;
        for (std::size_t j = 1; j < m; ++j) phi[j] = prev[j] - kappa * prev[m - j];
        profile.v[m] = vm;
        std::span<double> wm = w.row(m);
        for (std::size_t j = 1; j <= m; ++j) wm[m - j] = phi[j];
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(m) + 1, prev.begin());
    }
    return {std::move(w), std::move(profile)};
}

std::pair<PredictorWeights, ConditionalProfile>
predictor_weights(const GaussianIncrementModel& model, const FactorOptions& opt) {
    if (model.uniform_grid()) {
        const std::vector<double> r = model.stationary_autocovariances();
        return weights_levinson(r, opt);
    }
    return weights_from_factor(factorize(increment_covariance(model), opt));
}

double terminal_compensator_variance(const PredictorWeights& w, const SymmetricMatrix& cov) {
    const std::vector<double> u = w.terminal_coefficients();
    return cov.quad_form(u);
}

double NormalStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // (x >> 11) + 1 over 2^53 lies in (0, 1], so the log is finite
    const double u1 = static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>((rng_() >> 11) + 1) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index) {
    return mix64(mix64(seed) + path_index + 1);
}

void PathSampler::sample(std::uint64_t path_index, std::span<double> increments) const {
    NormalStream stream(path_seed(seed_, path_index));
    for (std::size_t j = 0; j < increments.size(); ++j) increments[j] = stream.next();
    factor_.apply(increments, increments);
}

SampleMatrix sample_increments(const TriangularFactor& factor, std::size_t n_paths,
                               std::uint64_t seed) {
    SampleMatrix samples;
    samples.n_paths = n_paths;
    samples.k = factor.dim();
    samples.data.resize(n_paths * factor.dim());
    PathSampler sampler(factor, seed);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n_paths); ++i) {
        std::span<double> row{samples.data.data() + static_cast<std::size_t>(i) * samples.k,
                              samples.k};
        sampler.sample(static_cast<std::uint64_t>(i), row);
    }
    return samples;
}

}  // namespace fbmlab
