#include "fbmlab/models.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace fbmlab {

double fbm_covariance(double s, double t, HurstIndex h) {
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("fBm covariance needs s, t >= 0");
    const double a = 2.0 * h.value();
    return 0.5 * (std::pow(t, a) + std::pow(s, a) - std::pow(std::abs(t - s), a));
}

GaussianIncrementModel::GaussianIncrementModel(HurstIndex h, Partition partition)
    : h_(h), partition_(std::move(partition)) {}

double GaussianIncrementModel::stationary_autocovariance(std::size_t lag) const {
    if (!uniform_grid())
        throw std::logic_error("stationary autocovariance needs a uniform grid");
    const double a = 2.0 * h_.value();
    const double dt = partition_.horizon() / static_cast<double>(steps());
    const double l = static_cast<double>(lag);
    const double shape =
        0.5 * (std::pow(l + 1.0, a) - 2.0 * std::pow(l, a) + std::pow(std::abs(l - 1.0), a));
    return std::pow(dt, a) * shape;
}

std::vector<double> GaussianIncrementModel::stationary_autocovariances() const {
    std::vector<double> r(steps());
    for (std::size_t lag = 0; lag < r.size(); ++lag) r[lag] = stationary_autocovariance(lag);
    return r;
}

SymmetricMatrix increment_covariance(const GaussianIncrementModel& model) {
    const std::size_t k = model.steps();
    const Partition& part = model.partition();
    const double a = 2.0 * model.hurst().value();
    SymmetricMatrix cov(k);
    if (model.uniform_grid()) {
        const std::vector<double> r = model.stationary_autocovariances();
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j <= i; ++j) cov.at(i, j) = r[i - j];
        return cov;
    }
    // Cov(dX_i, dX_j) = (|t_{i+1}-t_j|^a + |t_i-t_{j+1}|^a - |t_{i+1}-t_{j+1}|^a - |t_i-t_j|^a)/2
    for (std::size_t i = 0; i < k; ++i) {
        cov.at(i, i) = std::pow(part.dt(i), a);
        for (std::size_t j = 0; j < i; ++j) {
            const double outer = std::pow(part.time(i + 1) - part.time(j), a) +
                                 std::pow(part.time(i) - part.time(j + 1), a);
            const double inner = std::pow(part.time(i + 1) - part.time(j + 1), a) +
                                 std::pow(part.time(i) - part.time(j), a);
            cov.at(i, j) = 0.5 * (outer - inner);
        }
    }
    return cov;
}

double analytic_energy(const GaussianIncrementModel& model) {
    const double a = 2.0 * model.hurst().value();
    double s = 0.0;
    for (std::size_t j = 0; j < model.steps(); ++j) s += std::pow(model.partition().dt(j), a);
    return s;
}

}  // namespace fbmlab
