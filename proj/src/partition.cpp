#include "fbmlab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace fbmlab {

namespace {

GridFraction reduced(std::int64_t num, std::int64_t den) {
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

// exact a/b vs c/d comparison; denominators are positive
bool fraction_equal(const GridFraction& a, const GridFraction& b) {
    return a.num == b.num && a.den == b.den;  // both stored in lowest terms
}

bool fraction_less(const GridFraction& a, const GridFraction& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

}  // namespace

HurstIndex::HurstIndex(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0))
        throw std::invalid_argument("Hurst index must lie in the open interval (0, 1)");
}

Partition Partition::uniform(double horizon, std::size_t k) {
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (k < 1) throw std::invalid_argument("a partition needs at least one step");
    Partition p;
    p.horizon_ = horizon;
    p.uniform_ = true;
    p.times_.resize(k + 1);
    p.fracs_.resize(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
        p.times_[j] = horizon * static_cast<double>(j) / static_cast<double>(k);
        p.fracs_[j] = reduced(static_cast<std::int64_t>(j), static_cast<std::int64_t>(k));
    }
    p.times_.back() = horizon;  // guard the endpoint against round-off
    return p;
}

Partition Partition::from_times(std::vector<double> times) {
    if (times.size() < 2) throw std::invalid_argument("a partition needs at least two times");
    if (times.front() != 0.0) throw std::invalid_argument("partitions start at t = 0");
    for (std::size_t j = 0; j + 1 < times.size(); ++j) {
        if (!(times[j] < times[j + 1]))
            throw std::invalid_argument("partition times must be strictly increasing");
    }
    if (!std::isfinite(times.back())) throw std::invalid_argument("partition times must be finite");
    Partition p;
    p.horizon_ = times.back();
    p.times_ = std::move(times);
    return p;
}

double Partition::mesh() const {
    double m = 0.0;
    for (std::size_t j = 0; j < steps(); ++j) m = std::max(m, dt(j));
    return m;
}

bool Partition::refines(const Partition& coarser) const {
    if (has_exact_times() && coarser.has_exact_times() && horizon_ == coarser.horizon_) {
        // merge over sorted reduced fractions; every coarse point must match
        std::size_t i = 0;
        for (const GridFraction& c : coarser.fracs_) {
            while (i < fracs_.size() && fraction_less(fracs_[i], c)) ++i;
            if (i == fracs_.size() || !fraction_equal(fracs_[i], c)) return false;
        }
        return true;
    }
    const double tol = 1e-12 * std::max(horizon_, coarser.horizon_);
    if (std::abs(horizon_ - coarser.horizon_) > tol) return false;
    for (double t : coarser.times_) {
        auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
        if (it == times_.end() || std::abs(*it - t) > tol) return false;
    }
    return true;
}

std::size_t Partition::floor_index(double t) const {
    if (t <= times_.front()) return 0;
    if (t >= times_.back()) return times_.size() - 1;
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

PartitionSequence::PartitionSequence(std::vector<Partition> partitions)
    : partitions_(std::move(partitions)) {
    if (partitions_.empty()) throw std::invalid_argument("empty partition sequence");
}

bool PartitionSequence::valid(std::string* reason) const {
    for (std::size_t n = 0; n + 1 < partitions_.size(); ++n) {
        if (!partitions_[n + 1].refines(partitions_[n])) {
            if (reason) *reason = "stage " + std::to_string(n + 1) +
                                  " does not contain every grid point of stage " + std::to_string(n);
            return false;
        }
        if (!(partitions_[n + 1].mesh() < partitions_[n].mesh())) {
            if (reason) *reason = "mesh does not decrease from stage " + std::to_string(n) +
                                  " to stage " + std::to_string(n + 1);
            return false;
        }
    }
    return true;
}

Partition uniform_partition(double horizon, std::size_t k) {
    return Partition::uniform(horizon, k);
}

PartitionSequence dyadic_sequence(double horizon, int n_min, int n_max) {
    if (n_min < 0 || n_min > n_max) throw std::invalid_argument("need 0 <= n_min <= n_max");
    if (n_max >= 31) throw std::invalid_argument("dyadic level too large");
    std::vector<Partition> parts;
    parts.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n)
        parts.push_back(Partition::uniform(horizon, std::size_t{1} << n));
    return PartitionSequence(std::move(parts));
}

}  // namespace fbmlab
