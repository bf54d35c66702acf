#pragma once

#include "fbmlab/linalg.hpp"
#include "fbmlab/partition.hpp"

#include <vector>

namespace fbmlab {

// E(B^H_t B^H_s) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2
double fbm_covariance(double s, double t, HurstIndex h);

// Covariance structure of fBm increments on a grid. X_0 = 0 almost surely;
// t_0 never enters any conditioning set. Immutable after construction.
class GaussianIncrementModel {
public:
    GaussianIncrementModel(HurstIndex h, Partition partition);

    HurstIndex hurst() const { return h_; }
    const Partition& partition() const { return partition_; }
    std::size_t steps() const { return partition_.steps(); }
    bool uniform_grid() const { return partition_.uniform_grid(); }

    // Cov(dX_1, dX_{1+lag}) on a uniform grid:
    //   dt^{2H} * (|lag+1|^{2H} - 2|lag|^{2H} + |lag-1|^{2H}) / 2
    double stationary_autocovariance(std::size_t lag) const;
    std::vector<double> stationary_autocovariances() const;  // lags 0..k-1

private:
    HurstIndex h_;
    Partition partition_;
};

// k x k matrix with entry (i,j) = Cov(X_{t_{i+1}}-X_{t_i}, X_{t_{j+1}}-X_{t_j}).
// Diagonal is (dt_j)^{2H} in closed form; uniform grids use the stationary
// autocovariance, general grids polarize fbm_covariance.
SymmetricMatrix increment_covariance(const GaussianIncrementModel& model);

// E[X^theta]_T = sum_j (dt_j)^{2H}, the expected discrete quadratic variation
double analytic_energy(const GaussianIncrementModel& model);

}  // namespace fbmlab
