#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fbmlab {

// Hurst index H of a fractional Brownian motion, restricted to the open
// interval (0, 1). H = 1/2 is ordinary Brownian motion.
class HurstIndex {
public:
    explicit HurstIndex(double value);
    double value() const { return value_; }
    bool is_brownian() const { return value_ == 0.5; }

private:
    double value_;
};

// Exact grid time t = (num/den) * horizon, in lowest terms. Grids built by
// uniform subdivision carry these so that nesting checks are exact instead
// of comparing rounded doubles.
struct GridFraction {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

// Sampling grid 0 = t_0 < t_1 < ... < t_k = T on [0, T].
class Partition {
public:
    // times j*T/k for j = 0..k
    static Partition uniform(double horizon, std::size_t k);
    // arbitrary strictly increasing grid; first time must be 0
    static Partition from_times(std::vector<double> times);

    std::size_t steps() const { return times_.size() - 1; }  // k
    double horizon() const { return horizon_; }
    double time(std::size_t i) const { return times_[i]; }
    double dt(std::size_t j) const { return times_[j + 1] - times_[j]; }  // j = 0..k-1
    double mesh() const;
    std::span<const double> times() const { return times_; }

    bool has_exact_times() const { return !fracs_.empty(); }
    bool uniform_grid() const { return uniform_; }

    // true when every grid point of `coarser` is a grid point of *this
    bool refines(const Partition& coarser) const;

    // largest index i with t_i <= t (step-function convention); t in [0, T]
    std::size_t floor_index(double t) const;

private:
    Partition() = default;

    std::vector<double> times_;
    std::vector<GridFraction> fracs_;  // empty when times are not exact
    double horizon_ = 0.0;
    bool uniform_ = false;
};

// Nested sequence with mesh decreasing to zero ("normally condensing").
class PartitionSequence {
public:
    explicit PartitionSequence(std::vector<Partition> partitions);

    std::size_t size() const { return partitions_.size(); }
    const Partition& operator[](std::size_t i) const { return partitions_[i]; }
    const std::vector<Partition>& partitions() const { return partitions_; }

    // checks theta_n subset theta_{n+1} and strictly decreasing mesh
    bool valid(std::string* reason = nullptr) const;

private:
    std::vector<Partition> partitions_;
};

Partition uniform_partition(double horizon, std::size_t k);

// uniform partitions with k = 2^n for n = n_min..n_max; nested by construction
PartitionSequence dyadic_sequence(double horizon, int n_min, int n_max);

}  // namespace fbmlab
