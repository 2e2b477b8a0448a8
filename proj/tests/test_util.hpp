#pragma once

#include <cstddef>
#include <vector>

#include "isoglm/isotonic.hpp"
#include "isoglm/rng.hpp"

namespace isoglm::testutil {

// Random desk-scale LPAV instance: z uniform in [-1,1], y uniform in [0,1].
// With ties enabled, abscissae are snapped to a coarse grid so exact
// duplicates actually occur.
inline RegressionInstance random_instance(Rng& rng, std::size_t m, bool with_ties = false) {
    std::vector<double> z(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        z[i] = rng.uniform(-1.0, 1.0);
        if (with_ties) z[i] = std::round(z[i] * 4.0) / 4.0;
        y[i] = rng.uniform01();
    }
    return RegressionInstance::canonical(std::move(z), std::move(y));
}

inline double kahan_sum(const std::vector<double>& xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        const double t = x - carry;
        const double s = sum + t;
        carry = (s - sum) - t;
        sum = s;
    }
    return sum;
}

}  // namespace isoglm::testutil
