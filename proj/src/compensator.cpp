#include "fbmlab/compensator.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fbmlab {

DiscretePath::DiscretePath(Partition p, std::vector<double> v)
    : partition(std::move(p)), values(std::move(v)) {
    if (values.size() != partition.steps() + 1)
        throw std::invalid_argument("path needs one value per grid point");
    if (values.front() != 0.0) throw std::invalid_argument("paths start at X_0 = 0");
}

void compensator_increments(const PredictorWeights& w, std::span<const double> dx,
                            std::span<double> da) {
    // dA_j = E(dX_j | dX_0..dX_{j-1}); the first increment has empty past
    for (std::size_t j = 0; j < dx.size(); ++j) {
        std::span<const double> wj = w.row(j);
        double acc = 0.0;
        for (std::size_t i = 0; i < j; ++i) acc += wj[i] * dx[i];
        da[j] = acc;
    }
}

DecompositionPath compensator_path(const PredictorWeights& w, const DiscretePath& path) {
    const std::size_t k = path.partition.steps();
    if (w.dim() != k) throw std::invalid_argument("weights and path grids disagree");
    std::vector<double> dx(k), da(k);
    for (std::size_t j = 0; j < k; ++j) dx[j] = path.values[j + 1] - path.values[j];
    compensator_increments(w, dx, da);
    DecompositionPath d{path, std::vector<double>(k + 1), std::vector<double>(k + 1)};
    d.a[0] = 0.0;
    for (std::size_t j = 0; j < k; ++j) d.a[j + 1] = d.a[j] + da[j];
    for (std::size_t i = 0; i <= k; ++i) d.m[i] = path.values[i] - d.a[i];
    return d;
}

double quadratic_variation(std::span<const double> values) {
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        const double dy = values[j + 1] - values[j];
        s += dy * dy;
    }
    return s;
}

double sup_deviation(const DecompositionPath& d) {
    double m = 0.0;
    for (double x : d.m) m = std::max(m, std::abs(x));
    return m;
}

double jacod_sum(const ConditionalProfile& profile, const Partition& partition, double t) {
    // v_j belongs to the increment ending at t_{j+1}
    const std::size_t upto = partition.floor_index(t);
    double s = 0.0;
    for (std::size_t j = 0; j < upto; ++j) s += profile.v[j];
    return s;
}

StepFunction::StepFunction(Partition p, std::vector<double> v)
    : partition(std::move(p)), values(std::move(v)) {
    if (values.size() != partition.steps() + 1)
        throw std::invalid_argument("step function needs one value per grid point");
}

double cesaro_average(std::span<const StepFunction> compensators, double t) {
    if (compensators.empty()) throw std::invalid_argument("Cesaro mean of nothing");
    double s = 0.0;
    for (const StepFunction& f : compensators) s += f.at(t);
    return s / static_cast<double>(compensators.size());
}

}  // namespace fbmlab
