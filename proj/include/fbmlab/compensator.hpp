#pragma once

#include "fbmlab/engine.hpp"
#include "fbmlab/partition.hpp"

#include <span>
#include <vector>

namespace fbmlab {

// Grid samples X_{t_0}..X_{t_k} of one trajectory, X_{t_0} = 0.
struct DiscretePath {
    Partition partition;
    std::vector<double> values;

    DiscretePath(Partition p, std::vector<double> v);
};

// X = A + M on the grid. a is accumulated from its increments
// dA_j = sum_{i<j} w_{j,i} dX_i (so A_{t_1} = 0); m stores the exact
// double subtraction x - a pointwise, which is the decomposition identity
// solved for M and keeps sup|X - A| == sup|M| bit-for-bit.
struct DecompositionPath {
    DiscretePath x;
    std::vector<double> a;
    std::vector<double> m;
};

// increment-level core: da_j = w.row(j) . dx[0..j)
void compensator_increments(const PredictorWeights& w, std::span<const double> dx,
                            std::span<double> da);

DecompositionPath compensator_path(const PredictorWeights& w, const DiscretePath& path);

// [Y]_T = sum_j (Y_{t_j} - Y_{t_{j-1}})^2
double quadratic_variation(std::span<const double> values);

// max over grid points of |X - A| (= max |M|)
double sup_deviation(const DecompositionPath& d);

// sum of v_j over increments ending at or before t; deterministic because
// Gaussian conditional variances are non-random
double jacod_sum(const ConditionalProfile& profile, const Partition& partition, double t);

// Grid values with the step-function evaluation convention: the value at
// the largest grid point <= t.
struct StepFunction {
    Partition partition;
    std::vector<double> values;  // size k+1

    StepFunction(Partition p, std::vector<double> v);
    double at(double t) const { return values[partition.floor_index(t)]; }
};

// B^N_t = (1/N) sum_j A^j_t
double cesaro_average(std::span<const StepFunction> compensators, double t);

}  // namespace fbmlab
