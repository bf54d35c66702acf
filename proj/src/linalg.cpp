#include "fbmlab/linalg.hpp"

#include <cmath>

namespace fbmlab {

double SymmetricMatrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double SymmetricMatrix::quad_form(std::span<const double> x) const {
    // off-diagonal slots appear twice in x'Sx
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < i; ++j) row += at(i, j) * x[j];
        s += x[i] * (2.0 * row + at(i, i) * x[i]);
    }
    return s;
}

}  // namespace fbmlab
