#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fbmlab {

// Dense symmetric matrix, packed lower-triangular row-major storage.
// Entry (i,j) with j > i reads the mirrored (j,i) slot.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t dim)
        : dim_(dim), data_(dim * (dim + 1) / 2, 0.0) {}

    std::size_t dim() const { return dim_; }

    double& at(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    double at(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

    double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += at(i, i);
        return s;
    }

    double max_abs() const;

    // x' * S * x
    double quad_form(std::span<const double> x) const;

private:
    static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }
    static std::size_t index(std::size_t i, std::size_t j) {
        return j <= i ? offset(i) + j : offset(j) + i;
    }

    std::size_t dim_ = 0;
    std::vector<double> data_;
};

}  // namespace fbmlab
