#pragma once

#include "fbmlab/linalg.hpp"
#include "fbmlab/models.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fbmlab {

// Thrown when a factorization pivot falls at or below 1e-13 * max diagonal.
// No silent regularization: the failing index is reported instead.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(std::size_t index, double pivot);
    std::size_t index() const { return index_; }
    double pivot() const { return pivot_; }

private:
    std::size_t index_;
    double pivot_;
};

// Opt-in ridge added to the diagonal before factorizing. Default off; meant
// for exploratory runs only, the exact-identity tests never set it.
struct FactorOptions {
    double ridge = 0.0;
};

// Lower-triangular factor L with cov = L L', packed rows (row j holds
// entries 0..j). Row j is the loading of increment j on innovations 0..j,
// so the factor doubles as the innovations representation.
class TriangularFactor {
public:
    explicit TriangularFactor(std::size_t dim)
        : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

    std::size_t dim() const { return dim_; }
    double at(std::size_t i, std::size_t j) const {
        return j <= i ? data_[i * (i + 1) / 2 + j] : 0.0;
    }
    double diag(std::size_t j) const { return data_[j * (j + 1) / 2 + j]; }
    std::span<const double> row(std::size_t j) const {
        return {data_.data() + j * (j + 1) / 2, j + 1};
    }
    std::span<double> row(std::size_t j) {
        return {data_.data() + j * (j + 1) / 2, j + 1};
    }

    // out = L z
    void apply(std::span<const double> z, std::span<double> out) const;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

// Dense Cholesky, built one row at a time (one factorization yields every
// leading principal factor along the way).
TriangularFactor factorize(const SymmetricMatrix& cov, const FactorOptions& opt = {});

// O(k^2) Schur-type recursion for symmetric positive definite Toeplitz
// covariances given by their first column. Same factor as factorize()
// applied to the full matrix, up to round-off.
TriangularFactor factorize_toeplitz(std::span<const double> autocov,
                                    const FactorOptions& opt = {});

// Strictly lower-triangular regression coefficients: row j holds w_{j,i},
// i < j, with E(dX_j | dX_0..dX_{j-1}) = sum_i w_{j,i} dX_i. Row 0 is empty.
class PredictorWeights {
public:
    explicit PredictorWeights(std::size_t dim)
        : dim_(dim), data_(dim * (dim - 1) / 2, 0.0) {}

    std::size_t dim() const { return dim_; }
    double at(std::size_t j, std::size_t i) const {
        return i < j ? data_[j * (j - 1) / 2 + i] : 0.0;
    }
    std::span<const double> row(std::size_t j) const {
        return {data_.data() + j * (j - 1) / 2, j};
    }
    std::span<double> row(std::size_t j) {
        return {data_.data() + j * (j - 1) / 2, j};
    }

    double max_abs() const;

    // u_i = sum_{j>i} w_{j,i}, so that A_T = u . dX
    std::vector<double> terminal_coefficients() const;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

// Innovation variances v_j = Var(dX_j | dX_0..dX_{j-1}) = L[j][j]^2.
struct ConditionalProfile {
    std::vector<double> v;
    double sum() const;
};

// Uniform grids take the O(k^2) Levinson-Durbin route, everything else one
// dense factorization plus per-row triangular solves.
std::pair<PredictorWeights, ConditionalProfile>
predictor_weights(const GaussianIncrementModel& model, const FactorOptions& opt = {});

// the two routes, exposed for cross-checking
std::pair<PredictorWeights, ConditionalProfile>
weights_from_factor(const TriangularFactor& factor);
std::pair<PredictorWeights, ConditionalProfile>
weights_levinson(std::span<const double> autocov, const FactorOptions& opt = {});

// Var(A_T) = u' cov u with u the terminal coefficients; exact, no sampling.
double terminal_compensator_variance(const PredictorWeights& w, const SymmetricMatrix& cov);

// Standard normal stream: mt19937_64 + Box-Muller, fully determined by the
// 64-bit seed state (no reliance on std::normal_distribution internals).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed_state) : rng_(seed_state) {}
    double next();

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream-splitting rule: path i draws from a NormalStream seeded with
// mix64(mix64(seed) + i + 1), so any scheduling of paths yields identical
// samples. mix64 is the splitmix64 output function.
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path_index);

// Samples the increment vector of path `path_index` into `increments`
// (exact joint law on the grid: L z with z iid standard normal).
class PathSampler {
public:
    PathSampler(TriangularFactor factor, std::uint64_t seed)
        : factor_(std::move(factor)), seed_(seed) {}

    std::size_t dim() const { return factor_.dim(); }
    const TriangularFactor& factor() const { return factor_; }
    void sample(std::uint64_t path_index, std::span<double> increments) const;

private:
    TriangularFactor factor_;
    std::uint64_t seed_;
};

// Row-major n_paths x k matrix of sampled increment vectors.
struct SampleMatrix {
    std::size_t n_paths = 0;
    std::size_t k = 0;
    std::vector<double> data;

    std::span<const double> path(std::size_t i) const {
        return {data.data() + i * k, k};
    }
};

SampleMatrix sample_increments(const TriangularFactor& factor, std::size_t n_paths,
                               std::uint64_t seed);

}  // namespace fbmlab
