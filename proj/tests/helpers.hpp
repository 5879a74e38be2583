#pragma once

#include "hebbsync/graph.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace hebbsync::test {

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

inline Vector uniform_vector(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
    return v;
}

inline Matrix random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = d(rng);
    return 0.5 * (m + m.transpose());
}

}  // namespace hebbsync::test
